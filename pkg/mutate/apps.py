from django.apps import AppConfig


class MutateConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'mutate'
