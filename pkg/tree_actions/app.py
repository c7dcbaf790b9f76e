#!python3
import argparse
import json
import logging
import os
import sys

from tree_actions.config import (
    BUDGET_DEFAULTS,
    COMMANDS,
    FORMATS,
    RunConfig,
    get_config
)
from tree_actions.errors import ConfigError, TreeActionsError
from tree_actions.free_group import GroupPresentation, parse_words
from tree_actions.logger import Logger
from tree_actions.models.base import Verdict
from tree_actions.plotter import margin_plotter, n_hat_plotter, overlap_plotter
from tree_actions.report_manager import ReportManager
from tree_actions.suites.analyze_suite import AnalyzeSuite
from tree_actions.suites.complex_suite import ComplexSuite
from tree_actions.suites.fold_suite import FoldSuite
from tree_actions.suites.lemma_suite import LemmaSuite
from tree_actions.suites.persistence_suite import PersistenceSuite

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# suites run by every command, results are merged in this order
SUITES = {
    'analyze': [AnalyzeSuite],
    'lemmas': [LemmaSuite, FoldSuite],
    'complex': [ComplexSuite],
    'persistence': [PersistenceSuite],
    'folds': [FoldSuite]
}

COMMAND_HELP = {
    'analyze': "reduction, root, translation length and primitivity of words",
    'lemmas': "tree lemma, fold and bounded backtracking suites",
    'complex': "projection family, axioms and the quasi-tree C_K",
    'persistence': "persistence estimate and the Dehn twist examples",
    'folds': "fold decomposition, bounded backtracking and collapse suites"
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog='tree-actions',
        description="Executable checks of group actions on trees.")
    parser.add_argument('--config', default='app.cfg',
                        help="configuration file (default: app.cfg)")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--presentation',
                        help="presentation such as F2 or Z2*Z3")
    common.add_argument('--seed', type=int, help="root seed of the run")
    common.add_argument('--format', choices=FORMATS)
    common.add_argument('--out', help="output file, standard output if unset")
    common.add_argument('--workers', type=int,
                        help="worker processes for parallel sweeps")
    common.add_argument('--word', action='append', dest='words',
                        help="input word, may be repeated")
    common.add_argument('--input',
                        help="file with one word per line")
    common.add_argument('--automorphism', action='append',
                        dest='automorphisms',
                        help="automorphism as moves separated by ';'")
    common.add_argument('--automorphisms-file',
                        help="file with one automorphism per line")
    common.add_argument('--constants',
                        help="JSON list of persistence constants C")
    common.add_argument('--pairs', action='store_true', default=None,
                        help="measure persistence on pairs of partners")
    common.add_argument('--plot-dir', help="directory for PNG plots")
    common.add_argument('--log-level', help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument('--acceptance', action='store_const',
                        const='acceptance', dest='profile',
                        help="run at the full acceptance scale")
    common.add_argument('--self-test', action='store_true', default=None,
                        help=argparse.SUPPRESS)
    for name, default in BUDGET_DEFAULTS.items():
        common.add_argument(f"--budget-{name.replace('_', '-')}",
                            dest=f"budget_{name}", type=int,
                            help=f"default {default}")

    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common],
                              help=COMMAND_HELP[command])
    return parser


def _log_level(name):
    if name is None:
        return None
    level = logging.getLevelName(name.upper())
    if not isinstance(level, int):
        raise ConfigError(f"unknown log level '{name}'")
    return level


def read_words(path, presentation):
    '''
    Words of a file in normal form; parse errors carry the file line.
    '''
    with open(path) as f:
        return [str(w) for w in parse_words(f.read(), presentation)]


def read_automorphisms(path):
    with open(path) as f:
        return [line.strip() for line in f
                if line.strip() and not line.lstrip().startswith('#')]


def run_config_from_args(args, config):
    '''
    Merge app.cfg and the command line, flags win.
    '''
    budgets = {name: getattr(args, f"budget_{name}")
               for name in BUDGET_DEFAULTS
               if getattr(args, f"budget_{name}") is not None}
    try:
        constants = tuple(json.loads(args.constants)) \
            if args.constants else None
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid constants '{args.constants}': {e}") \
            from e

    run_config = RunConfig.from_config(
        config, args.command,
        presentation=args.presentation,
        seed=args.seed,
        format=args.format,
        out=args.out,
        workers=args.workers,
        words=list(args.words or []),
        automorphisms=list(args.automorphisms or []),
        constants=constants,
        pairs=args.pairs,
        self_test=args.self_test,
        profile=args.profile,
        log_level=_log_level(args.log_level),
        budgets=budgets
    )

    # Words and automorphisms from files follow the inline ones
    try:
        if args.input:
            presentation = GroupPresentation.parse(run_config.presentation)
            run_config.words += read_words(args.input, presentation)
        if args.automorphisms_file:
            run_config.automorphisms += \
                read_automorphisms(args.automorphisms_file)
    except OSError as e:
        raise ConfigError(f"cannot read input file: {e}") from e
    return run_config


def run_command(run_config):
    '''
    Run the suites of the command and merge their results.
    '''
    suites = [suite(run_config.log_level, run_config)
              for suite in SUITES[run_config.command]]
    result = suites[0].run()
    for suite in suites[1:]:
        result.extend(suite.run())
    return result, suites


def save_plots(suites, plot_dir):
    '''
    PNG plots of the persistence trials and the distance sandwich margins.
    '''
    written = []
    for suite in suites:
        estimate = getattr(suite, 'estimate', None) or \
            getattr(suite, 'persistence', None)
        if estimate is not None:
            written.append(overlap_plotter(
                estimate.trials, os.path.join(plot_dir, 'overlaps.png')))
            written.append(n_hat_plotter(
                estimate.n_hat, os.path.join(plot_dir, 'n_hat.png')))
        for report in suite.get_reports():
            histograms = {k: v for k, v in report.quantities.items()
                          if k.endswith('_histogram')}
            if histograms:
                written.append(margin_plotter(
                    histograms, os.path.join(plot_dir, 'margins.png')))
    return [path for path in written if path]


def main(argv=None):
    '''
    Parse the command line, run the command and write its report.

    Returns 0 when every check passed or was skipped, 1 when a check
    failed and 2 on usage, parse and precondition errors.
    '''
    logger = Logger(logger_name=__file__,
                    log_level=logging.WARNING).get_logger()

    # Get config options
    args = build_parser().parse_args(argv)
    config = get_config(args.config)
    if config is not None and config.has_section('logging'):
        Logger.log_file = config['logging'].get('LOG_FILE') or None

    try:
        # Merge config file and flags into one run configuration
        run_config = run_config_from_args(args, config)

        # Run the suites of the command
        result, suites = run_command(run_config)

        # Write the report in the requested format
        report_manager = ReportManager(run_config.log_level, run_config)
        report_manager.save_result(result, suites)

        # Plots are optional side outputs
        plot_dir = args.plot_dir or (
            config['plots'].get('PLOT_DIR') if config is not None and
            config.has_section('plots') else None)
        if plot_dir:
            for path in save_plots(suites, plot_dir):
                logger.info(f"saved plot {path}")

    except TreeActionsError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if result.verdict == Verdict.FAIL:
        return EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    # Initialise logger
    logger = Logger(logger_name=__file__, log_level=logging.INFO).get_logger()

    # Run main and allow stopping with CTRL-C (KeyboardInterrupt)
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("keyboard interrupt detected, exiting application")
