from django.apps import AppConfig


class EnergyMimoConfig(AppConfig):
    name = 'energymimo.energymimo'
    label = 'energymimo'
    verbose_name = 'Energy-saving massive MIMO precoding'
