from tree_actions.trees.base_tree import BASE, MetricTree, Vertex
from tree_actions.trees.bass_serre_tree import BassSerreTree
from tree_actions.trees.cayley_tree import CayleyTree


def tree_for(presentation, log_level=None):
    '''
    The Cayley tree for free groups and the Bass-Serre tree otherwise.
    '''
    kwargs = {} if log_level is None else {'log_level': log_level}
    if presentation.is_free:
        return CayleyTree(presentation, **kwargs)
    return BassSerreTree(presentation, **kwargs)


__all__ = ['BASE', 'MetricTree', 'Vertex', 'BassSerreTree', 'CayleyTree',
           'tree_for']
