from django.apps import AppConfig


class LinearizedConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'linearized'
    verbose_name = 'Operador linearizado'
