import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'hdg_mg.settings')
django.setup()
