"""
ADMINISTRATION DJANGO DU BANC D'ESSAI - ULDPACK

Consultation en lecture seule des exécutions et de leurs résultats.
"""
from django.contrib import admin
from django.utils.html import format_html

from .models import BenchmarkResult, BenchmarkRun


def utilization_badge(value):
    if value is None:
        return "N/A"
    if value >= 0.8:
        color = '#28a745'  # vert
    elif value >= 0.6:
        color = '#ffc107'  # jaune
    else:
        color = '#dc3545'  # rouge
    return format_html('<span style="color: {}; font-weight: bold;">{}</span>', color, f"{value:.1%}")


class ReadOnlyAdmin(admin.ModelAdmin):
    def has_add_permission(self, request, obj=None):
        return False

    def has_change_permission(self, request, obj=None):
        return False


class BenchmarkResultInline(admin.TabularInline):
    model = BenchmarkResult
    extra = 0
    can_delete = False
    fields = ['instance', 'group', 'variant', 'uld_count', 'unloaded_items', 'utilization', 'elapsed', 'valid']
    readonly_fields = fields

    def has_add_permission(self, request, obj=None):
        return False


# =============================================================================
# EXÉCUTIONS
# =============================================================================

@admin.register(BenchmarkRun)
class BenchmarkRunAdmin(ReadOnlyAdmin):
    """Administration des exécutions de banc d'essai."""

    list_display = ['date_creation', 'suite', 'seed', 'instance_count', 'utilization_colored', 'elapsed']
    list_filter = ['suite', 'date_creation']
    search_fields = ['directory']
    inlines = [BenchmarkResultInline]

    def utilization_colored(self, obj):
        return utilization_badge(obj.mean_utilization)
    utilization_colored.short_description = "Remplissage moyen"
    utilization_colored.admin_order_field = 'mean_utilization'


# =============================================================================
# RÉSULTATS
# =============================================================================

@admin.register(BenchmarkResult)
class BenchmarkResultAdmin(ReadOnlyAdmin):
    list_display = ['instance', 'run', 'variant', 'uld_count', 'utilization_colored', 'valid']
    list_filter = ['variant', 'valid', 'run__suite']
    search_fields = ['instance']

    def utilization_colored(self, obj):
        return utilization_badge(obj.utilization)
    utilization_colored.short_description = "Remplissage"
    utilization_colored.admin_order_field = 'utilization'
