from django.apps import AppConfig


class LinalgConfig(AppConfig):
    name = 'linalg'
