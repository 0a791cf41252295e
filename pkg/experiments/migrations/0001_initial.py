# Generated by Django 5.2.6 on 2025-10-02 14:10

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('kind', models.CharField(choices=[('simulate', 'Simulação'), ('sweep', 'Varredura')], default='simulate', max_length=12)),
                ('scenario', models.CharField(max_length=40)),
                ('status', models.CharField(choices=[('running', 'Em execução'), ('done', 'Concluída'), ('failed', 'Falhou')], default='running', max_length=12)),
                ('seed', models.PositiveIntegerField(default=0)),
                ('workers', models.PositiveIntegerField(default=1)),
                ('config', models.JSONField(default=dict)),
                ('output_dir', models.CharField(max_length=500)),
                ('final_rel_entropy', models.FloatField(blank=True, null=True)),
                ('decay_rate', models.FloatField(blank=True, null=True)),
                ('decay_r_squared', models.FloatField(blank=True, null=True)),
                ('max_conservation_drift', models.FloatField(blank=True, null=True)),
                ('erro', models.TextField(blank=True, default='')),
                ('sweep_parameter', models.CharField(blank=True, default='', max_length=60)),
                ('sweep_value', models.CharField(blank=True, default='', max_length=60)),
                ('criado_em', models.DateTimeField(auto_now_add=True)),
                ('finalizado_em', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'ordering': ['-criado_em', '-id'],
                'indexes': [models.Index(fields=['scenario', 'status'], name='experiments_scenari_5c1f0e_idx')],
            },
        ),
        migrations.CreateModel(
            name='VerificationReport',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('suite', models.CharField(max_length=20)),
                ('passed', models.BooleanField(default=False)),
                ('config', models.JSONField(default=dict)),
                ('metrics', models.JSONField(default=list)),
                ('report', models.TextField()),
                ('criado_em', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-criado_em', '-id'],
            },
        ),
        migrations.CreateModel(
            name='DiagnosticsSample',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('time', models.FloatField()),
                ('energy', models.FloatField()),
                ('entropy', models.FloatField()),
                ('rel_entropy', models.FloatField()),
                ('entropy_production', models.FloatField()),
                ('payload', models.JSONField(default=dict)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='samples', to='experiments.simulationrun')),
            ],
            options={
                'ordering': ['run', 'time'],
                'constraints': [models.UniqueConstraint(fields=('run', 'time'), name='uniq_sample_run_time')],
            },
        ),
    ]
