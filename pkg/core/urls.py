# core/urls.py
from django.contrib import admin
from django.urls import include, path

urlpatterns = [
    path("admin/", admin.site.urls),

    # -------- API (somente leitura) --------
    path("api/", include(("experiments.api_urls", "api_experiments"), namespace="api_experiments")),
]
