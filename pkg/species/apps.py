from django.apps import AppConfig


class SpeciesConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'species'
    verbose_name = 'Espécies e núcleos de colisão'
