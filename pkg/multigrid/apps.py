from django.apps import AppConfig


class MultigridConfig(AppConfig):
    name = 'multigrid'
