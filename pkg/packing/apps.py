from django.apps import AppConfig


class PackingAppConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'packing'
    verbose_name = 'Solveur de chargement ULD'
