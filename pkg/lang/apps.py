from django.apps import AppConfig


class LangConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'lang'
