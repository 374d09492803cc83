from experiments.commands import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Error and EOC table of the HDG Stokes discretization'
    equation = 'stokes'
    study = 'converge'
