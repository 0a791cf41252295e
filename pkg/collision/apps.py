from django.apps import AppConfig


class CollisionConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'collision'
    verbose_name = 'Operadores de colisão'
