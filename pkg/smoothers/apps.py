from django.apps import AppConfig


class SmoothersConfig(AppConfig):
    name = 'smoothers'
