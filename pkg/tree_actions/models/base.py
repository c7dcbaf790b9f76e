import numbers
from enum import Enum
from fractions import Fraction

from tree_actions.free_group import GroupPresentation, ReducedWord


class Verdict(str, Enum):
    PASS = 'pass'
    FAIL = 'fail'
    SKIPPED = 'skipped'


def to_jsonable(value):
    '''
    Convert report values into JSON-ready builtins.

    Words and automorphisms become their text form, exact rationals become
    "p/q" strings so they survive a round trip, and vertices become
    [representative, class] pairs.
    '''
    # Vertex is a NamedTuple, checked before plain tuples
    if hasattr(value, '_fields') and hasattr(value, 'vertex_class'):
        return [to_jsonable(value.rep), value.vertex_class]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, str):
        return value
    if isinstance(value, numbers.Real):
        return round(float(value), 12)
    if isinstance(value, (ReducedWord, GroupPresentation)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in value]
        return sorted(items, key=str) if isinstance(value, (set, frozenset)) \
            else items
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict())
    return str(value)
