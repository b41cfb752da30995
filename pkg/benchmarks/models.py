"""
MODÈLES DJANGO DU BANC D'ESSAI - ULDPACK

Chaque invocation de ``bench`` est conservée :
1. BenchmarkRun : suite, graine, paramètres appliqués, durée totale
2. BenchmarkResult : une ligne par (instance, variante) avec les mesures du plan
"""
import uuid

from django.core.validators import MaxValueValidator, MinValueValidator
from django.db import models


class BenchmarkRun(models.Model):
    """Exécution d'une suite de bancs d'essai"""

    class SuiteChoices(models.TextChoices):
        BR = 'br', 'Instances de référence (conteneur unique)'
        PAQUAY = 'paquay', 'Instances multi-ULD'
        ADAPTED_UNLIMITED = 'adapted_unlimited', 'Instances adaptées, ULD illimitées'
        ADAPTED_1ULD = 'adapted_1uld', 'Instances adaptées, une ULD par type'
        ABLATION = 'ablation', 'Ablation des variantes'

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    suite = models.CharField(max_length=20, choices=SuiteChoices.choices)
    directory = models.CharField(max_length=500, help_text="Répertoire des instances")
    seed = models.PositiveIntegerField(default=0)
    workers = models.PositiveSmallIntegerField(default=1)
    params = models.JSONField(default=dict, help_text="Surcharges appliquées par la suite et la ligne de commande")
    instance_count = models.PositiveIntegerField(default=0)
    mean_utilization = models.FloatField(
        null=True, blank=True, validators=[MinValueValidator(0), MaxValueValidator(1)],
    )
    elapsed = models.FloatField(default=0, help_text="Durée totale en secondes")
    date_creation = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = "Exécution de banc d'essai"
        verbose_name_plural = "Exécutions de banc d'essai"
        ordering = ['-date_creation']
        db_table = 'benchmarks_run'

    def __str__(self):
        return f"{self.get_suite_display()} - graine {self.seed} - {self.instance_count} instances"


class BenchmarkResult(models.Model):
    """Mesures d'une résolution"""

    run = models.ForeignKey(BenchmarkRun, on_delete=models.CASCADE, related_name='results')
    instance = models.CharField(max_length=200)
    group = models.CharField(max_length=50, blank=True, help_text="Sous-ensemble d'instances (nombre de types...)")
    variant = models.CharField(max_length=20, default='default')
    uld_count = models.PositiveIntegerField(default=0)
    loaded_items = models.PositiveIntegerField(default=0)
    unloaded_items = models.PositiveIntegerField(default=0)
    utilization = models.FloatField(default=0)
    elapsed = models.FloatField(default=0)
    cog_violations = models.PositiveIntegerField(default=0)
    substructure_count = models.PositiveIntegerField(default=0)
    criteria = models.JSONField(default=list, help_text="Critère de tri retenu par ULD chargée")
    valid = models.BooleanField(default=True)

    class Meta:
        verbose_name = "Résultat de banc d'essai"
        verbose_name_plural = "Résultats de banc d'essai"
        ordering = ['run', 'group', 'instance', 'variant']
        db_table = 'benchmarks_result'
        indexes = [
            models.Index(fields=['run', 'variant'], name='benchmarks_run_variant_idx'),
        ]

    def __str__(self):
        return f"{self.instance} ({self.variant}) : {self.utilization:.3f}"
