import configparser
import json
import logging
from dataclasses import dataclass, field
from typing import Optional

from tree_actions.errors import ConfigError

COMMANDS = ('analyze', 'lemmas', 'complex', 'persistence', 'folds')
FORMATS = ('json', 'csv', 'dot', 'text')

MAX_SEED = 2 ** 64

# Scale of every command, overridable from app.cfg and --budget-* flags
BUDGET_DEFAULTS = {
    'word_length': 4,
    'torsion_syllables': 3,
    'overlap_length': 4,
    'instances': 200,
    'exponent_bound': 4,
    'morphisms': 20,
    'max_edges': 6,
    'bbt_samples': 200,
    'path_length': 6,
    'collapse_morphisms': 10,
    'collapse_pairs': 100,
    'candidate_length': 10,
    'pool_length': 3,
    'y_pool_length': 2,
    'complex_spaces': 12,
    'window_radius': 0,
    'sandwich_samples': 200,
    'quadruples': 2000,
    'stabilizer_length': 3,
    'equivariance_samples': 20,
    'trials': 3,
    'max_multiple': 5,
    'counterexample_n': 50
}

# Scale of the full acceptance run, selected with --acceptance and overridable
# from the [acceptance] section of app.cfg
ACCEPTANCE_BUDGETS = {
    **BUDGET_DEFAULTS,
    'word_length': 6,
    'torsion_syllables': 4,
    'overlap_length': 8,
    'instances': 1000,
    'morphisms': 100,
    'bbt_samples': 1000,
    'pool_length': 4,
    'y_pool_length': 4,
    'sandwich_samples': 1000,
    'quadruples': 10000
}

PROFILES = {'default': BUDGET_DEFAULTS, 'acceptance': ACCEPTANCE_BUDGETS}


# create config parser
def get_config(path='app.cfg'):
    try:
        config = configparser.ConfigParser()
        config.read(path)
    except configparser.Error:
        return None
    else:
        return config


@dataclass
class RunConfig:
    """
    Everything one command needs to run reproducibly.

    Attributes
    ----------
    command: str
        One of COMMANDS
    presentation: str
        Presentation spec such as "F2" or "Z2*Z3"
    words: list
        Input words as text
    automorphisms: list
        Input automorphisms as move text, moves separated by ';'
    seed: int
        Root seed, recorded in every report
    budgets: dict
        Sizes of the sweeps, completed from the budgets of the profile
    profile: str
        One of PROFILES, 'acceptance' for the full acceptance scale
    format: str
        Output format, one of FORMATS
    out: str or None
        Output path, None for standard output
    workers: int
        Worker processes for parallel sweeps
    constants: tuple
        Values of C for persistence estimates
    pairs: bool
        Estimate persistence with pairs of partners
    self_test: bool
        Corrupt an oracle so that the fail verdict path is exercised
    log_level: int
        Level of every package logger
    """
    command: str
    presentation: str = 'F2'
    words: list = field(default_factory=list)
    automorphisms: list = field(default_factory=list)
    seed: int = 0
    budgets: dict = field(default_factory=dict)
    profile: str = 'default'
    format: str = 'json'
    out: Optional[str] = None
    workers: int = 1
    constants: tuple = (1, 2, 3)
    pairs: bool = False
    self_test: bool = False
    log_level: int = logging.WARNING

    def __post_init__(self):

        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command '{self.command}'")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format '{self.format}', expected one "
                              f"of {', '.join(FORMATS)}")
        if not 0 <= self.seed < MAX_SEED:
            raise ConfigError(f"seed {self.seed} is not a 64-bit integer")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.profile not in PROFILES:
            raise ConfigError(f"unknown profile '{self.profile}', expected "
                              f"one of {', '.join(PROFILES)}")

        unknown = set(self.budgets) - set(BUDGET_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown budgets: {', '.join(sorted(unknown))}")
        self.budgets = {**PROFILES[self.profile], **self.budgets}
        for name, value in self.budgets.items():
            if not isinstance(value, int) or value < 0:
                raise ConfigError(f"budget {name} must be a nonnegative "
                                  f"integer, got {value}")

        self.constants = tuple(self.constants)
        if not self.constants or any(c < 1 for c in self.constants):
            raise ConfigError("persistence constants must be positive")

    def budget(self, name):
        return self.budgets[name]

    @classmethod
    def from_config(cls, config, command, **overrides):
        '''
        Build a RunConfig from the [run], [budgets] and [logging] sections
        of app.cfg; keyword overrides that are not None win. The acceptance
        profile reads its budgets from [acceptance] instead of [budgets].
        '''
        values = {'command': command}
        if config is not None:
            run = config['run'] if config.has_section('run') else {}
            if 'PROFILE' in run:
                values['profile'] = run['PROFILE']
            if 'PRESENTATION' in run:
                values['presentation'] = run['PRESENTATION']
            if 'SEED' in run:
                values['seed'] = int(run['SEED'])
            if 'FORMAT' in run:
                values['format'] = run['FORMAT']
            if 'WORKERS' in run:
                values['workers'] = int(run['WORKERS'])
            if 'CONSTANTS' in run:
                values['constants'] = tuple(json.loads(run['CONSTANTS']))

            profile = overrides.get('profile') or values.get('profile')
            section = 'acceptance' if profile == 'acceptance' else 'budgets'
            if config.has_section(section):
                values['budgets'] = {name.lower(): int(value) for name, value
                                     in config[section].items()}

            if config.has_section('logging') and \
                    'LOG_LEVEL' in config['logging']:
                level = logging.getLevelName(
                    config['logging']['LOG_LEVEL'].upper())
                if not isinstance(level, int):
                    raise ConfigError(f"unknown log level '{level}'")
                values['log_level'] = level

        budgets = dict(values.get('budgets', {}))
        budgets.update(overrides.pop('budgets', None) or {})
        values['budgets'] = budgets
        values.update({k: v for k, v in overrides.items() if v is not None})

        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigError(f"invalid configuration: {e}") from e

    def to_dict(self):
        return {
            'command': self.command,
            'presentation': self.presentation,
            'words': list(self.words),
            'automorphisms': list(self.automorphisms),
            'seed': self.seed,
            'budgets': dict(sorted(self.budgets.items())),
            'profile': self.profile,
            'format': self.format,
            'workers': self.workers,
            'constants': list(self.constants),
            'pairs': self.pairs,
            'self_test': self.self_test
        }
