import json

import pytest

from tree_actions.app import (
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_USAGE,
    build_parser,
    main,
    run_config_from_args
)
from tree_actions.config import (
    ACCEPTANCE_BUDGETS,
    BUDGET_DEFAULTS,
    get_config
)

QUIET_CFG = '''
[logging]
LOG_LEVEL = ERROR

[run]
SEED = 5
'''

ZERO_BUDGET_FLAGS = [flag for name in BUDGET_DEFAULTS
                     for flag in (f"--budget-{name.replace('_', '-')}", '0')]


@pytest.fixture
def cfg(tmp_path):
    path = tmp_path / 'app.cfg'
    path.write_text(QUIET_CFG)
    return str(path)


def test_analyze_json(cfg, tmp_path):
    out = tmp_path / 'analyze.json'
    code = main(['--config', cfg, 'analyze', '--word', 'abAB',
                 '--word', 'abab', '--out', str(out)])
    assert code == EXIT_PASS

    document = json.loads(out.read_text())
    assert document['schema_version'] == 1
    assert document['config']['seed'] == 5
    assert document['verdict'] == 'pass'


def test_parse_error(cfg, capsys):
    code = main(['--config', cfg, 'analyze', '--word', 'ab?a'])
    assert code == EXIT_USAGE
    assert 'column 3' in capsys.readouterr().err


def test_self_test_exits_with_failure(cfg, tmp_path):
    code = main(['--config', cfg, 'lemmas', '--self-test',
                 *ZERO_BUDGET_FLAGS, '--budget-word-length', '3',
                 '--out', str(tmp_path / 'lemmas.json')])
    assert code == EXIT_FAIL


def test_csv_output(cfg, capsys):
    code = main(['--config', cfg, 'analyze', '--word', 'aab',
                 '--format', 'csv'])
    assert code == EXIT_PASS
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith('word,')
    assert lines[1].startswith('aab,3,')


def test_dot_output(cfg, capsys):
    code = main(['--config', cfg, 'analyze', '--word', 'a',
                 '--format', 'dot'])
    assert code == EXIT_PASS
    assert capsys.readouterr().out.startswith('graph ball {')


@pytest.mark.parametrize('flags', [
    ['--log-level', 'LOUD'],
    ['--constants', '[0, 1]'],
    ['--constants', 'not json'],
    ['--presentation', 'Q8'],
    ['--seed', '-3']
])
def test_usage_errors(cfg, flags):
    assert main(['--config', cfg, 'analyze', '--word', 'a', *flags]) == \
        EXIT_USAGE


def test_input_file(cfg, tmp_path, capsys):
    words = tmp_path / 'words.txt'
    words.write_text('# commutator\nabAB\n\naab\n')
    code = main(['--config', cfg, 'analyze', '--input', str(words),
                 '--format', 'text'])
    assert code == EXIT_PASS
    out = capsys.readouterr().out
    assert 'word=abAB' in out
    assert 'word=aab' in out


def test_input_file_errors(cfg, tmp_path, capsys):
    assert main(['--config', cfg, 'analyze',
                 '--input', str(tmp_path / 'missing.txt')]) == EXIT_USAGE

    words = tmp_path / 'words.txt'
    words.write_text('ab\nac\n')
    assert main(['--config', cfg, 'analyze',
                 '--input', str(words)]) == EXIT_USAGE
    assert 'line 2' in capsys.readouterr().err


def test_missing_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_flags_override_config(cfg):
    args = build_parser().parse_args(
        ['lemmas', '--seed', '9', '--budget-instances', '7',
         '--constants', '[2, 5]', '--word', 'ab'])
    run_config = run_config_from_args(args, get_config(cfg))
    assert run_config.seed == 9
    assert run_config.budget('instances') == 7
    assert run_config.budget('trials') == BUDGET_DEFAULTS['trials']
    assert run_config.constants == (2, 5)
    assert run_config.words == ['ab']
    assert not run_config.self_test


def test_config_seed_without_flag(cfg):
    args = build_parser().parse_args(['folds'])
    assert run_config_from_args(args, get_config(cfg)).seed == 5


@pytest.mark.slow
def test_persistence_plots(cfg, tmp_path):
    plot_dir = tmp_path / 'plots'
    code = main(['--config', cfg, 'persistence', '--word', 'a',
                 '--budget-trials', '1', '--budget-max-multiple', '2',
                 '--budget-pool-length', '1',
                 '--budget-counterexample-n', '2',
                 '--plot-dir', str(plot_dir),
                 '--out', str(tmp_path / 'persistence.json')])
    assert code == EXIT_PASS
    assert (plot_dir / 'overlaps.png').exists()


def test_acceptance_flag_selects_the_profile(cfg):
    args = build_parser().parse_args(
        ['lemmas', '--acceptance', '--budget-overlap-length', '5'])
    run_config = run_config_from_args(args, get_config(cfg))
    assert run_config.profile == 'acceptance'
    assert run_config.budget('word_length') == \
        ACCEPTANCE_BUDGETS['word_length']
    assert run_config.budget('overlap_length') == 5
    assert run_config.to_dict()['profile'] == 'acceptance'

    plain = run_config_from_args(build_parser().parse_args(['lemmas']),
                                 get_config(cfg))
    assert plain.profile == 'default'
