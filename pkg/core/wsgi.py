# core/wsgi.py
"""Ponto de entrada WSGI do laboratório (serve a API de execuções e relatórios)."""
import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")

application = get_wsgi_application()
