import logging

from django.core.management.base import BaseCommand, CommandError

from multigrid.hierarchy import CYCLES
from smoothers.factory import SMOOTHER_KINDS
from .forms import ExperimentConfigForm
from .runners import RUNNERS

logger = logging.getLogger(__name__)


class ExperimentCommand(BaseCommand):
    """
    Shared options of the experiment commands; subclasses set `equation` and `study`
    """
    equation = None
    study = None

    def add_arguments(self, parser):
        parser.add_argument('--dim', type=int, default=2, choices=[2, 3])
        parser.add_argument('--levels', type=int, default=4, help='number of refinement levels J')
        parser.add_argument('--coarse-h', type=float, help='target element diameter of the coarse mesh')
        parser.add_argument('--problem', choices=[key for key, _ in ExperimentConfigForm.PROBLEMS])
        parser.add_argument('--smoother', choices=[key for key, _ in SMOOTHER_KINDS])
        parser.add_argument('--steps', type=int, help='smoothing steps on the finest level')
        parser.add_argument('--cycle', choices=[key for key, _ in CYCLES])
        parser.add_argument('--mode', choices=[key for key, _ in ExperimentConfigForm.MODES])
        parser.add_argument('--beta', type=float)
        parser.add_argument('--mu', type=float)
        parser.add_argument('--rho', type=float, help='chessboard contrast')
        parser.add_argument('--eps', type=float, help='augmented Lagrangian parameter')
        parser.add_argument('--uzawa-steps', type=int)
        parser.add_argument('--tol', type=float)
        parser.add_argument('--max-iter', type=int)
        parser.add_argument('--damping', type=float, help='Jacobi damping')
        parser.add_argument('--out', help='CSV file; standard output if omitted')

    def handle(self, *args, **options):
        data = {key: value for key, value in options.items() if value is not None}
        data.update(equation=self.equation, study=self.study)
        form = ExperimentConfigForm(data)
        if not form.is_valid():
            messages = [f'{field}: {" ".join(errors)}' for field, errors in form.errors.items()]
            raise CommandError('Invalid experiment: ' + '; '.join(messages))
        config = form.config()

        report = RUNNERS[self.study][self.equation](config)
        logger.info('%s: %d levels in %.2fs', report.title, len(report.rows), report.wall_time or 0.0)
        if options.get('out'):
            with open(options['out'], 'w', newline='') as stream:
                report.to_csv(stream)
            self.stdout.write(f"Wrote {options['out']}")
        else:
            report.to_csv(self.stdout)
