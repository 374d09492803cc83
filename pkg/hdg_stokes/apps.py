from django.apps import AppConfig


class HdgStokesConfig(AppConfig):
    name = 'hdg_stokes'
