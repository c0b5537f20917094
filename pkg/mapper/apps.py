from django.apps import AppConfig


class MapperConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'mapper'
