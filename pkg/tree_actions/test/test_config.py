import configparser
import logging

import pytest

from tree_actions.config import (
    ACCEPTANCE_BUDGETS,
    BUDGET_DEFAULTS,
    RunConfig,
    get_config
)
from tree_actions.errors import ConfigError

APP_CFG = '''
[logging]
LOG_LEVEL = INFO

[run]
PRESENTATION = Z2*Z3
SEED = 7
FORMAT = text
CONSTANTS = [1, 4]

[budgets]
INSTANCES = 5
'''


@pytest.fixture
def config():
    parser = configparser.ConfigParser()
    parser.read_string(APP_CFG)
    return parser


def test_defaults():
    run_config = RunConfig('lemmas')
    assert run_config.budgets == BUDGET_DEFAULTS
    assert run_config.budget('overlap_length') == 4
    assert run_config.presentation == 'F2'
    assert run_config.log_level == logging.WARNING


@pytest.mark.parametrize('kwargs', [
    {'command': 'prove'},
    {'command': 'lemmas', 'format': 'xml'},
    {'command': 'lemmas', 'seed': -1},
    {'command': 'lemmas', 'seed': 2 ** 64},
    {'command': 'lemmas', 'workers': 0},
    {'command': 'lemmas', 'budgets': {'lemmas': 3}},
    {'command': 'lemmas', 'budgets': {'instances': -1}},
    {'command': 'lemmas', 'constants': (0,)},
    {'command': 'lemmas', 'constants': ()},
    {'command': 'lemmas', 'profile': 'huge'}
])
def test_invalid_configs(kwargs):
    with pytest.raises(ConfigError):
        RunConfig(**kwargs)


def test_from_config(config):
    run_config = RunConfig.from_config(config, 'analyze')
    assert run_config.presentation == 'Z2*Z3'
    assert run_config.seed == 7
    assert run_config.format == 'text'
    assert run_config.constants == (1, 4)
    assert run_config.log_level == logging.INFO
    assert run_config.budget('instances') == 5
    assert run_config.budget('trials') == BUDGET_DEFAULTS['trials']


def test_overrides_win(config):
    run_config = RunConfig.from_config(config, 'analyze', seed=9,
                                       format=None,
                                       budgets={'instances': 11})
    assert run_config.seed == 9
    assert run_config.format == 'text'
    assert run_config.budget('instances') == 11


def test_unknown_log_level(config):
    config['logging']['LOG_LEVEL'] = 'LOUD'
    with pytest.raises(ConfigError):
        RunConfig.from_config(config, 'analyze')


def test_to_dict_records_seed_and_budgets():
    data = RunConfig('folds', seed=3).to_dict()
    assert data['seed'] == 3
    assert list(data['budgets']) == sorted(BUDGET_DEFAULTS)
    assert data['constants'] == [1, 2, 3]


def test_missing_config_file(tmp_path):
    config = get_config(tmp_path / 'missing.cfg')
    assert config.sections() == []
    assert RunConfig.from_config(config, 'lemmas').seed == 0


def test_acceptance_profile():
    run_config = RunConfig('lemmas', profile='acceptance',
                           budgets={'instances': 10})
    assert run_config.budget('word_length') == 6
    assert run_config.budget('overlap_length') == 8
    assert run_config.budget('quadruples') == 10 ** 4
    assert run_config.budget('instances') == 10
    assert set(ACCEPTANCE_BUDGETS) == set(BUDGET_DEFAULTS)


def test_acceptance_section(config):
    config.read_string('[acceptance]\nWORD_LENGTH = 5\n')
    run_config = RunConfig.from_config(config, 'lemmas',
                                       profile='acceptance')
    assert run_config.budget('word_length') == 5
    # [budgets] belongs to the default profile
    assert run_config.budget('instances') == ACCEPTANCE_BUDGETS['instances']

    config['run']['PROFILE'] = 'acceptance'
    assert RunConfig.from_config(config, 'lemmas').profile == 'acceptance'
    assert RunConfig.from_config(config, 'lemmas', profile='default') \
        .budget('instances') == 5
