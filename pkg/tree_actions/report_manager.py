import json
import os
import platform
import sys
from importlib import metadata

import pandas as pd

from tree_actions import __version__
from tree_actions.errors import ConfigError
from tree_actions.logger import Logger
from tree_actions.models.base import to_jsonable
from tree_actions.models.reports import SuiteResult

SCHEMA_VERSION = 1

# distributions whose versions are recorded in every report
FINGERPRINT_PACKAGES = ('numpy', 'pandas', 'networkx', 'matplotlib', 'tqdm')

DOT_BALL_RADIUS = 3


class ReportManager():
    """
    A report manager class for rendering and storing suite results.

    Every command hands its SuiteResult and the suites that produced it to
    save_result, which renders the configured format and writes it to the
    output path or to standard output.

    Attributes
    ----------
    None

    Methods
    -------
    __init__(log_level, config)
        Keep the run configuration used by every report
    environment()
        Fingerprint of the interpreter, platform and package versions
    render(result, suites)
        Text of the result in the configured format
    save_result(result, suites)
        Render the result and write it out
    """

    def __init__(self, log_level, config):
        """
        Parameter
        ---------
        log_level: int
            The logging level as specified in the logging module
        config: RunConfig
            Configuration of the run, recorded in every report
        """
        self._config = config
        self._logger = Logger(logger_name=__file__,
                              log_level=log_level).get_logger()

    def environment(self):
        '''
        Interpreter, platform, package versions, seed and worker count.
        '''
        packages = {}
        for name in FINGERPRINT_PACKAGES:
            try:
                packages[name] = metadata.version(name)
            except metadata.PackageNotFoundError:
                packages[name] = None

        return {
            'tree_actions': __version__,
            'python': platform.python_version(),
            'implementation': sys.implementation.name,
            'platform': platform.platform(),
            'packages': packages,
            'seed': self._config.seed,
            'workers': self._config.workers
        }

    def render(self, result: SuiteResult, suites) -> str:

        fmt = self._config.format
        if fmt == 'json':
            return self.to_json(result)
        if fmt == 'csv':
            frames = [suite.get_frame() for suite in suites]
            return pd.concat(frames, ignore_index=True).to_csv(index=False)
        if fmt == 'dot':
            return self.to_dot(suites[0])
        return self.to_text(result)

    def to_json(self, result: SuiteResult) -> str:
        document = {
            'schema_version': SCHEMA_VERSION,
            'config': self._config.to_dict(),
            **result.to_dict(include_timing=True)
        }
        return json.dumps(to_jsonable(document), sort_keys=True,
                          indent=2) + '\n'

    def to_dot(self, suite) -> str:
        '''
        The windowed quasi-tree of a complex run, or the ball around the
        base vertex of the tree for every other command.

        Raises
        ------
        ConfigError
            If a complex run built no quasi-tree
        '''
        quasi_tree = getattr(suite, 'quasi_tree', None)
        if quasi_tree is not None:
            return quasi_tree.to_dot()
        if self._config.command == 'complex':
            raise ConfigError("no quasi-tree was built, the family has fewer "
                              "than 3 classes")
        tree = getattr(suite, 'tree', None)
        if tree is None:
            raise ConfigError(f"the {self._config.command} command has no "
                              "graph to draw")
        return tree.ball_to_dot(tree.origin, DOT_BALL_RADIUS)

    def to_text(self, result: SuiteResult) -> str:

        data = to_jsonable(result.to_dict(include_timing=False))
        counts = data['counts']
        lines = [f"command: {data['command']}",
                 f"verdict: {data['verdict']}",
                 f"checks: {counts['pass']} passed, {counts['fail']} failed, "
                 f"{counts['skipped']} skipped",
                 f"seed: {self._config.seed}"]

        for check in data['checks']:
            line = f"  {check['lemma_id']}: {check['verdict']}"
            if check['reason']:
                line += f" ({check['reason']})"
            lines.append(line)

        for name, section in data['summary'].items():
            lines.append(f"{name}:")
            if name == 'analyze':
                for row in section['words']:
                    lines.append("  " + ", ".join(f"{k}={v}"
                                                  for k, v in row.items()))
                continue
            for key, value in section.items():
                lines.append(f"  {key}: {json.dumps(value, sort_keys=True)}")

        if data['caveats']:
            lines.append("caveats:")
            lines.extend(f"  - {caveat}" for caveat in data['caveats'])
        return '\n'.join(lines) + '\n'

    def save_result(self, result: SuiteResult, suites):
        '''
        Record the environment, render the result and write it to the
        configured output, standard output when no path is set.
        '''
        result.environment = self.environment()
        text = self.render(result, suites)

        out = self._config.out
        if out is None:
            sys.stdout.write(text)
            return

        out_dir = os.path.dirname(out)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        with open(out, 'w') as f:
            f.write(text)
        self._logger.info(f"wrote {self._config.format} report to {out}")


def frame_of_rows(rows) -> pd.DataFrame:
    '''
    DataFrame of report rows with every value in its JSON form.
    '''
    return pd.DataFrame([to_jsonable(row) for row in rows])
