"""
URL configuration for uldpack project.

Seule l'administration est exposée : consultation des bancs d'essai.
"""

from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
