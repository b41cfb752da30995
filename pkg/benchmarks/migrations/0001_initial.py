import uuid

import django.core.validators
import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='BenchmarkRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('suite', models.CharField(choices=[('br', 'Instances de référence (conteneur unique)'), ('paquay', 'Instances multi-ULD'), ('adapted_unlimited', 'Instances adaptées, ULD illimitées'), ('adapted_1uld', 'Instances adaptées, une ULD par type'), ('ablation', 'Ablation des variantes')], max_length=20)),
                ('directory', models.CharField(help_text='Répertoire des instances', max_length=500)),
                ('seed', models.PositiveIntegerField(default=0)),
                ('workers', models.PositiveSmallIntegerField(default=1)),
                ('params', models.JSONField(default=dict, help_text='Surcharges appliquées par la suite et la ligne de commande')),
                ('instance_count', models.PositiveIntegerField(default=0)),
                ('mean_utilization', models.FloatField(blank=True, null=True, validators=[django.core.validators.MinValueValidator(0), django.core.validators.MaxValueValidator(1)])),
                ('elapsed', models.FloatField(default=0, help_text='Durée totale en secondes')),
                ('date_creation', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': "Exécution de banc d'essai",
                'verbose_name_plural': "Exécutions de banc d'essai",
                'db_table': 'benchmarks_run',
                'ordering': ['-date_creation'],
            },
        ),
        migrations.CreateModel(
            name='BenchmarkResult',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('instance', models.CharField(max_length=200)),
                ('group', models.CharField(blank=True, help_text="Sous-ensemble d'instances (nombre de types...)", max_length=50)),
                ('variant', models.CharField(default='default', max_length=20)),
                ('uld_count', models.PositiveIntegerField(default=0)),
                ('loaded_items', models.PositiveIntegerField(default=0)),
                ('unloaded_items', models.PositiveIntegerField(default=0)),
                ('utilization', models.FloatField(default=0)),
                ('elapsed', models.FloatField(default=0)),
                ('cog_violations', models.PositiveIntegerField(default=0)),
                ('substructure_count', models.PositiveIntegerField(default=0)),
                ('criteria', models.JSONField(default=list, help_text='Critère de tri retenu par ULD chargée')),
                ('valid', models.BooleanField(default=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='results', to='benchmarks.benchmarkrun')),
            ],
            options={
                'verbose_name': 'Résultat de banc d\'essai',
                'verbose_name_plural': 'Résultats de banc d\'essai',
                'db_table': 'benchmarks_result',
                'ordering': ['run', 'group', 'instance', 'variant'],
                'indexes': [models.Index(fields=['run', 'variant'], name='benchmarks_run_variant_idx')],
            },
        ),
    ]
