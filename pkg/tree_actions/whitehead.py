from __future__ import annotations

import random
from typing import NamedTuple

from tree_actions.automorphisms import (
    Automorphism,
    InvertGenerator,
    RightMultiply
)
from tree_actions.errors import (
    PreconditionError,
    UnsupportedPresentationError
)
from tree_actions.free_group import (
    GroupPresentation,
    ReducedWord,
    cyclic_reduce,
    random_word,
    root
)

MIN_CANDIDATE_LENGTH = 8


class WhiteheadResult(NamedTuple):
    '''
    Outcome of greedy Whitehead minimization.

    minimal is a cyclically reduced word of least cyclic length found and
    moves the Whitehead automorphisms applied, in order.
    '''
    minimal: ReducedWord
    moves: tuple

    @property
    def is_primitive(self):
        return len(self.minimal) == 1

    def composed(self):
        '''
        The single automorphism carrying the input to a conjugate of minimal.
        '''
        result = Automorphism.identity(self.minimal.presentation)
        for move in self.moves:
            result = move.compose(result)
        return result


def _require_free_group(presentation):
    if not presentation.is_free:
        raise UnsupportedPresentationError(
            f"Whitehead minimization needs a free group, got {presentation}")


def whitehead_automorphisms(presentation: GroupPresentation):
    '''
    Yield every Whitehead automorphism of the second kind.

    For a multiplier letter v and every other generator x, x is sent to one
    of x, x v, v^-1 x or v^-1 x v. Automorphisms of the first kind only
    permute and invert generators and never change cyclic length, so the
    descent does not need them.
    '''
    n = presentation.free_rank
    for j in range(n):
        for sign in (1, -1):
            others = [i for i in range(n) if i != j]
            for mask in range(1, 4 ** len(others)):
                moves = []
                for position, i in enumerate(others):
                    state = (mask >> (2 * position)) & 3
                    if state & 1:
                        moves.append(RightMultiply(i, j, sign))
                    if state & 2:
                        moves += [InvertGenerator(i),
                                  RightMultiply(i, j, sign),
                                  InvertGenerator(i)]
                yield Automorphism(presentation, tuple(moves))


def whitehead_minimize(w: ReducedWord) -> WhiteheadResult:
    '''
    Greedy steepest descent on cyclic length over Whitehead automorphisms.

    At each step the automorphism giving the shortest cyclic core is taken,
    ties broken by the shortlex least core; the descent stops when no
    automorphism shortens the core.

    Raises
    ------
    UnsupportedPresentationError
        If the presentation has finite factors
    '''
    presentation = w.presentation
    _require_free_group(presentation)

    current = cyclic_reduce(w)[0]
    candidates = list(whitehead_automorphisms(presentation))
    moves = []

    while len(current) > 1:
        best = None
        best_key = None
        for automorphism in candidates:
            image = cyclic_reduce(automorphism.apply(current))[0]
            if len(image) >= len(current):
                continue
            key = image.sort_key()
            if best_key is None or key < best_key:
                best, best_key = (automorphism, image), key
        if best is None:
            break
        moves.append(best[0])
        current = best[1]

    return WhiteheadResult(minimal=current, moves=tuple(moves))


def is_primitive(w: ReducedWord) -> bool:
    return whitehead_minimize(w).is_primitive


def uses_every_letter(w: ReducedWord) -> bool:
    return set(w.letters) == set(w.presentation.alphabet())


def sample_candidate_generic(presentation: GroupPresentation, seed: int,
                             length_budget: int,
                             max_attempts: int = 2000) -> ReducedWord:
    '''
    Draw a cyclically reduced word passing the genericity filters.

    The filters are heuristic: the word uses every generator and its
    inverse, is not a proper power and is not primitive. No certificate of
    genericity is produced.

    Raises
    ------
    UnsupportedPresentationError
        If the presentation has finite factors
    PreconditionError
        If length_budget cannot satisfy the filters or no word passed them
    '''
    _require_free_group(presentation)
    shortest = max(MIN_CANDIDATE_LENGTH, 2 * presentation.free_rank)
    if length_budget < shortest:
        raise PreconditionError(
            f"length budget {length_budget} is below {shortest}, the "
            "genericity filters cannot be met")

    rng = random.Random(seed)
    for _ in range(max_attempts):
        length = rng.randint(shortest, length_budget)
        w = random_word(presentation, length, rng, cyclically_reduced=True)
        if not uses_every_letter(w):
            continue
        if root(w)[1] != 1:
            continue
        if is_primitive(w):
            continue
        return w

    raise PreconditionError(
        f"no generic candidate found in {max_attempts} attempts")
