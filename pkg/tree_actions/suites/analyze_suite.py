from tree_actions.errors import ConfigError
from tree_actions.free_group import cyclic_reduce, has_finite_order, root
from tree_actions.report_manager import frame_of_rows
from tree_actions.suites.base_suite import BaseSuite
from tree_actions.trees import tree_for
from tree_actions.whitehead import is_primitive


class AnalyzeSuite(BaseSuite):
    '''
    Describe every input word: normal form, cyclic core, root, action on
    the tree of its presentation and, in free groups, primitivity.

    The analysis holds no checks, every row lands in the summary.
    '''

    def __init__(self, log_level, config):
        super().__init__(log_level, config)
        self.suite_name = 'analyze'
        self.tree = tree_for(self.presentation, log_level)

    def _execute_suite(self):
        words = self._words()
        if not words:
            raise ConfigError("analyze needs at least one word")
        self._summary['analyze'] = {
            'presentation': self.presentation,
            'model': self.tree.kind,
            'words': [self.analyze(w) for w in words]
        }

    def analyze(self, w):
        row = {'word': w, 'length': len(w), 'identity': w.is_identity}
        if w.is_identity:
            row.update({'action': 'elliptic', 'translation_length': 0})
            return row

        core, conjugator = cyclic_reduce(w)
        row['cyclic_core'] = core
        row['conjugator'] = conjugator
        row['syllable_length'] = w.syllable_length()

        if has_finite_order(w):
            row['finite_order'] = True
        else:
            base, exponent = root(w)
            row['root'] = base
            row['root_exponent'] = exponent

        length = self.tree.translation_length(w)
        row['translation_length'] = length
        if length == 0:
            row['action'] = 'elliptic'
            row['fixed_vertex'] = self.tree.char_set(w).vertex
        else:
            axis = self.tree.axis(w)
            row['action'] = 'loxodromic'
            row['axis_fundamental_domain'] = axis.fundamental_domain()

        if self.presentation.is_free:
            row['primitive'] = is_primitive(w)
        return row

    def get_frame(self):
        return frame_of_rows(self._summary.get('analyze', {}).get('words', []))
