from experiments.commands import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Error and EOC table of the HDG diffusion discretization'
    equation = 'diffusion'
    study = 'converge'
