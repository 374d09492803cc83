from django.apps import AppConfig


class HdgDiffusionConfig(AppConfig):
    name = 'hdg_diffusion'
