# Generated by Django 5.1.7 on 2026-10-17 09:40

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Assignment',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('slug', models.SlugField(max_length=64, unique=True)),
                ('title', models.CharField(max_length=255)),
                ('description', models.TextField(blank=True)),
            ],
            options={
                'db_table': 'assignment',
                'ordering': ['slug'],
            },
        ),
        migrations.CreateModel(
            name='ReferenceSolution',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('label', models.CharField(max_length=64)),
                ('source', models.TextField()),
                ('assignment', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='references', to='api.assignment')),
            ],
            options={
                'db_table': 'reference_solution',
                'ordering': ['label'],
            },
        ),
        migrations.CreateModel(
            name='SuiteCase',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('position', models.IntegerField()),
                ('stdin', models.TextField(blank=True)),
                ('expected_stdout', models.TextField(blank=True)),
                ('assignment', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='cases', to='api.assignment')),
            ],
            options={
                'db_table': 'suite_case',
                'ordering': ['position'],
            },
        ),
        migrations.CreateModel(
            name='Submission',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('source', models.TextField()),
                ('status', models.CharField(choices=[('PENDING', 'Pending'), ('CORRECT', 'Correct'), ('FIXED', 'Fixed'), ('EXHAUSTED', 'Exhausted'), ('TIMEOUT', 'Timeout'), ('INVALID', 'Invalid')], default='PENDING', max_length=10)),
                ('message', models.TextField(blank=True)),
                ('tests_passed', models.IntegerField(default=0)),
                ('tests_total', models.IntegerField(default=0)),
                ('repaired_source', models.TextField(blank=True, null=True)),
                ('mapping', models.JSONField(blank=True, null=True)),
                ('mappings_tried', models.IntegerField(default=0)),
                ('candidates_tried', models.IntegerField(default=0)),
                ('elapsed', models.FloatField(default=0)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('assignment', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='submissions', to='api.assignment')),
                ('reference', models.ForeignKey(blank=True, null=True, on_delete=django.db.models.deletion.SET_NULL, related_name='submissions', to='api.referencesolution')),
            ],
            options={
                'db_table': 'submission',
                'ordering': ['-created_at', '-id'],
            },
        ),
        migrations.AddConstraint(
            model_name='referencesolution',
            constraint=models.UniqueConstraint(fields=('assignment', 'label'), name='unique_reference_label'),
        ),
        migrations.AddConstraint(
            model_name='suitecase',
            constraint=models.CheckConstraint(condition=models.Q(('position__gte', 0)), name='position_gte_0'),
        ),
        migrations.AddConstraint(
            model_name='suitecase',
            constraint=models.UniqueConstraint(fields=('assignment', 'position'), name='unique_case_position'),
        ),
        migrations.AddConstraint(
            model_name='submission',
            constraint=models.CheckConstraint(condition=models.Q(('mappings_tried__gte', 0)), name='mappings_tried_gte_0'),
        ),
        migrations.AddConstraint(
            model_name='submission',
            constraint=models.CheckConstraint(condition=models.Q(('candidates_tried__gte', 0)), name='candidates_tried_gte_0'),
        ),
        migrations.AddConstraint(
            model_name='submission',
            constraint=models.CheckConstraint(condition=models.Q(('elapsed__gte', 0)), name='elapsed_gte_0'),
        ),
    ]
