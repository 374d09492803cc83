from django.apps import AppConfig


class QuadratureConfig(AppConfig):
    name = 'quadrature'
