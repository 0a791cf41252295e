# core/asgi.py
"""Ponto de entrada ASGI do laboratório (serve a API de execuções e relatórios)."""
import os

from django.core.asgi import get_asgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")

application = get_asgi_application()
