from experiments.commands import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Multigrid iteration counts and condition estimates for diffusion'
    equation = 'diffusion'
    study = 'mg'
