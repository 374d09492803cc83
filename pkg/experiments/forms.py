import math

from django import forms

from multigrid.hierarchy import CYCLES
from smoothers.factory import BLOCK_KINDS, SMOOTHER_KINDS

# coarse unit-box meshes: element diameter at most 1/4 in 2D and 1/2 in 3D
COARSE_DIAMETER = {2: 0.25, 3: 0.5}


class ExperimentConfig(object):
    """Validated settings of one experiment run"""

    def __init__(self, **kwargs):
        for key, value in kwargs.items():
            setattr(self, key, value)

    @property
    def is_stokes(self) -> bool:
        return self.equation == 'stokes'


class ExperimentConfigForm(forms.Form):
    EQUATIONS = [
        ('diffusion', 'reaction-diffusion'),
        ('stokes', 'Stokes'),
    ]
    PROBLEMS = [
        ('smooth', 'manufactured reaction-diffusion solution'),
        ('chessboard', 'chessboard diffusion coefficient'),
        ('manufactured', 'manufactured Stokes solution'),
        ('cavity', 'lid-driven cavity'),
        ('step', 'backward-facing step'),
    ]
    DIFFUSION_PROBLEMS = ('smooth', 'chessboard')
    EXACT_PROBLEMS = ('smooth', 'manufactured')
    MODES = [
        ('solver', 'stationary multigrid'),
        ('precond', 'multigrid preconditioned CG'),
        ('direct', 'sparse direct solver'),
    ]
    STUDIES = [
        ('converge', 'convergence study'),
        ('mg', 'multigrid study'),
    ]

    equation = forms.ChoiceField(choices=EQUATIONS)
    study = forms.ChoiceField(choices=STUDIES)
    dim = forms.TypedChoiceField(choices=[(2, '2'), (3, '3')], coerce=int)
    levels = forms.IntegerField(min_value=1, max_value=10)
    coarse_h = forms.FloatField(min_value=0.0, required=False)
    problem = forms.ChoiceField(choices=PROBLEMS, required=False)
    smoother = forms.ChoiceField(choices=SMOOTHER_KINDS, required=False)
    steps = forms.IntegerField(min_value=1, required=False)
    cycle = forms.ChoiceField(choices=CYCLES, required=False)
    mode = forms.ChoiceField(choices=MODES, required=False)
    beta = forms.FloatField(min_value=0.0, required=False)
    mu = forms.FloatField(required=False)
    rho = forms.FloatField(required=False)
    eps = forms.FloatField(required=False)
    uzawa_steps = forms.IntegerField(min_value=1, required=False)
    tol = forms.FloatField(required=False)
    max_iter = forms.IntegerField(min_value=1, required=False)
    damping = forms.FloatField(required=False)

    def clean(self):
        cleaned_data = super(ExperimentConfigForm, self).clean()
        if self.errors:
            return cleaned_data
        stokes = cleaned_data['equation'] == 'stokes'
        dim = cleaned_data['dim']

        if not cleaned_data.get('problem'):
            cleaned_data['problem'] = 'manufactured' if stokes else 'smooth'
        if (cleaned_data['problem'] in self.DIFFUSION_PROBLEMS) == stokes:
            self.add_error('problem', f"Problem {cleaned_data['problem']} does not fit the {cleaned_data['equation']} equation")
        if cleaned_data['study'] == 'converge' and cleaned_data['problem'] not in self.EXACT_PROBLEMS:
            self.add_error('problem', 'Convergence studies need a problem with a known solution')

        if not cleaned_data.get('smoother'):
            cleaned_data['smoother'] = 'bgs' if stokes else 'pgs'
        if stokes and cleaned_data['smoother'] not in BLOCK_KINDS:
            self.add_error('smoother', 'Stokes hierarchies need a vertex patch smoother')

        if not cleaned_data.get('mode'):
            cleaned_data['mode'] = 'direct' if cleaned_data['study'] == 'converge' else 'precond'
        if cleaned_data['study'] == 'mg' and cleaned_data['mode'] == 'direct':
            self.add_error('mode', 'A multigrid study needs the solver or precond mode')

        if not cleaned_data.get('cycle'):
            cleaned_data['cycle'] = 'varv' if stokes else 'v'
        if cleaned_data.get('steps') is None:
            cleaned_data['steps'] = 1 if stokes else 2

        if cleaned_data.get('coarse_h') is None:
            if cleaned_data['problem'] == 'step':
                cleaned_data['coarse_h'] = math.sqrt(dim) * (0.25 if dim == 2 else 0.5)
            else:
                cleaned_data['coarse_h'] = COARSE_DIAMETER[dim]
        elif cleaned_data['coarse_h'] <= 0:
            self.add_error('coarse_h', 'Mesh size must be positive')

        for name, default in (('mu', 1.0), ('rho', 1.0)):
            if cleaned_data.get(name) is None:
                cleaned_data[name] = default
            elif cleaned_data[name] <= 0:
                self.add_error(name, 'Must be positive')
        if cleaned_data.get('eps') is not None and cleaned_data['eps'] <= 0:
            self.add_error('eps', 'Must be positive')
        if cleaned_data.get('tol') is not None and not 0 < cleaned_data['tol'] < 1:
            self.add_error('tol', 'Must lie in (0, 1)')
        if cleaned_data.get('damping') is not None and cleaned_data['damping'] <= 0:
            self.add_error('damping', 'Must be positive')
        return cleaned_data

    def config(self) -> ExperimentConfig:
        return ExperimentConfig(**self.cleaned_data)
