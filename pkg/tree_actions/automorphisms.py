from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable

from tree_actions.errors import PresentationError, WordParseError
from tree_actions.free_group import (
    GroupPresentation,
    Letter,
    ReducedWord,
    push_letters,
    parse_word,
    words_up_to_length
)


class ElementaryMove(ABC):
    '''
    An invertible endomorphism of a free product given by generator images.

    Moves act on words by substitution. Each subclass defines the image of
    every factor generator, its formal inverse and its one-line serialized
    form.
    '''

    @abstractmethod
    def generator_image(self, factor, presentation) -> ReducedWord:
        pass

    @abstractmethod
    def inverse(self) -> ElementaryMove:
        pass

    @abstractmethod
    def to_line(self, presentation) -> str:
        pass

    def validate(self, presentation):
        pass

    def images(self, presentation):
        return [self.generator_image(i, presentation)
                for i in range(presentation.num_factors)]

    def apply(self, word: ReducedWord, images=None) -> ReducedWord:
        presentation = word.presentation
        images = images or self.images(presentation)
        stack = []
        for letter in word.letters:
            image = images[letter.factor]
            if presentation.order(letter.factor) == 0:
                if letter.exponent < 0:
                    image = image.inverse()
            else:
                image = image ** letter.exponent
            push_letters(stack, image.letters, presentation)
        return ReducedWord(presentation, tuple(stack))


def _generator(presentation, factor):
    return ReducedWord(presentation, (Letter(factor, 1),))


def _require_free(presentation, *factors):
    for factor in factors:
        if not presentation.is_free_factor(factor):
            raise PresentationError(
                f"factor {factor} is not a free generator of {presentation}")


def _require_finite(presentation, *factors):
    for factor in factors:
        if not presentation.free_rank <= factor < presentation.num_factors:
            raise PresentationError(
                f"factor {factor} is not a finite factor of {presentation}")


def _label(presentation, factor):
    return presentation.format_letter(Letter(factor, 1))


@dataclass(frozen=True)
class InvertGenerator(ElementaryMove):
    index: int

    def validate(self, presentation):
        _require_free(presentation, self.index)

    def generator_image(self, factor, presentation):
        g = _generator(presentation, factor)
        return g.inverse() if factor == self.index else g

    def inverse(self):
        return self

    def to_line(self, presentation):
        return f"invert {_label(presentation, self.index)}"


@dataclass(frozen=True)
class SwapGenerators(ElementaryMove):
    first: int
    second: int

    def validate(self, presentation):
        _require_free(presentation, self.first, self.second)
        if self.first == self.second:
            raise PresentationError("swap needs two distinct generators")

    def generator_image(self, factor, presentation):
        if factor == self.first:
            return _generator(presentation, self.second)
        if factor == self.second:
            return _generator(presentation, self.first)
        return _generator(presentation, factor)

    def inverse(self):
        return self

    def to_line(self, presentation):
        return (f"swap {_label(presentation, self.first)} "
                f"{_label(presentation, self.second)}")


@dataclass(frozen=True)
class RightMultiply(ElementaryMove):
    '''
    x_target -> x_target * x_source ** power with power +1 or -1.
    '''
    target: int
    source: int
    power: int = 1

    def validate(self, presentation):
        _require_free(presentation, self.target, self.source)
        if self.target == self.source:
            raise PresentationError("right multiplication needs i != j")
        if self.power not in (1, -1):
            raise PresentationError("right multiplication power is +1 or -1")

    def generator_image(self, factor, presentation):
        g = _generator(presentation, factor)
        if factor != self.target:
            return g
        return g * _generator(presentation, self.source) ** self.power

    def inverse(self):
        return RightMultiply(self.target, self.source, -self.power)

    def to_line(self, presentation):
        source = presentation.format_letter(Letter(self.source, self.power))
        return f"rmul {_label(presentation, self.target)} {source}"


@dataclass(frozen=True)
class ConjugateFactor(ElementaryMove):
    '''
    s_factor -> word * s_factor * word^-1 for a finite factor not used in
    word; every other generator is fixed.
    '''
    factor: int
    word: ReducedWord

    def validate(self, presentation):
        _require_finite(presentation, self.factor)
        if self.word.presentation != presentation:
            raise PresentationError("conjugating word has another presentation")
        if any(x.factor == self.factor for x in self.word.letters):
            raise PresentationError(
                "conjugating word must avoid the conjugated factor")

    def generator_image(self, factor, presentation):
        g = _generator(presentation, factor)
        if factor != self.factor:
            return g
        return g.conjugate(self.word)

    def inverse(self):
        return ConjugateFactor(self.factor, self.word.inverse())

    def to_line(self, presentation):
        return f"conj_factor {_label(presentation, self.factor)} {self.word}"


@dataclass(frozen=True)
class PermuteFactors(ElementaryMove):
    first: int
    second: int

    def validate(self, presentation):
        _require_finite(presentation, self.first, self.second)
        if presentation.order(self.first) != presentation.order(self.second):
            raise PresentationError("permuted factors must be isomorphic")

    def generator_image(self, factor, presentation):
        if factor == self.first:
            return _generator(presentation, self.second)
        if factor == self.second:
            return _generator(presentation, self.first)
        return _generator(presentation, factor)

    def inverse(self):
        return self

    def to_line(self, presentation):
        return (f"permute {_label(presentation, self.first)} "
                f"{_label(presentation, self.second)}")


@dataclass(frozen=True)
class InnerConjugation(ElementaryMove):
    '''
    The inner automorphism ad_word: x -> word * x * word^-1.
    '''
    word: ReducedWord

    def validate(self, presentation):
        if self.word.presentation != presentation:
            raise PresentationError("conjugating word has another presentation")

    def generator_image(self, factor, presentation):
        return _generator(presentation, factor).conjugate(self.word)

    def inverse(self):
        return InnerConjugation(self.word.inverse())

    def to_line(self, presentation):
        return f"inner {self.word}"


@dataclass(frozen=True)
class Automorphism:
    '''
    An automorphism stored as a sequence of elementary moves.

    Moves are applied first to last, so the automorphism is the composition
    moves[-1] o ... o moves[0]. The inverse reverses the list and inverts
    every move, which makes invertibility structural.
    '''
    presentation: GroupPresentation
    moves: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'moves', tuple(self.moves))
        for move in self.moves:
            move.validate(self.presentation)

    @classmethod
    def identity(cls, presentation):
        return cls(presentation, ())

    @classmethod
    def inner(cls, word):
        return cls(word.presentation, (InnerConjugation(word),))

    @classmethod
    def transvection(cls, presentation, target, source, exponent):
        '''
        x_target -> x_source ** exponent * x_target, other generators fixed.
        '''
        if exponent == 0:
            return cls.identity(presentation)
        power = -1 if exponent > 0 else 1
        moves = [InvertGenerator(target)]
        moves += [RightMultiply(target, source, power)] * abs(exponent)
        moves += [InvertGenerator(target)]
        return cls(presentation, tuple(moves))

    @classmethod
    def dehn_twist(cls, presentation, n, target=1, source=0):
        '''
        The twist b -> a^-n b fixing a (for the default generators).
        '''
        return cls.transvection(presentation, target, source, -n)

    def __call__(self, word):
        return self.apply(word)

    def apply(self, word: ReducedWord) -> ReducedWord:
        if word.presentation != self.presentation:
            raise PresentationError(
                f"word over {word.presentation} given to an automorphism of "
                f"{self.presentation}")
        for move in self.moves:
            word = move.apply(word)
        return word

    def inverse(self):
        return Automorphism(self.presentation,
                            tuple(m.inverse() for m in reversed(self.moves)))

    def compose(self, other):
        '''
        Return self o other, the automorphism applying other first.
        '''
        if other.presentation != self.presentation:
            raise PresentationError("cannot compose automorphisms of "
                                    "different presentations")
        return Automorphism(self.presentation, other.moves + self.moves)

    def then(self, move):
        return Automorphism(self.presentation, self.moves + (move,))

    def generator_images(self):
        return tuple(self.apply(g) for g in self.presentation.generators())

    def signature(self):
        '''
        Hashable description of the action on generators.
        '''
        return tuple(str(image) for image in self.generator_images())

    def is_identity(self):
        return self.generator_images() == tuple(
            self.presentation.generators())

    def to_text(self):
        return '\n'.join(m.to_line(self.presentation) for m in self.moves)

    def __str__(self):
        if not self.moves:
            return 'id'
        return '; '.join(m.to_line(self.presentation) for m in self.moves)


def _factor_from_label(label, presentation, text, line, column):
    word = parse_word(label, presentation, line=line)
    if len(word) != 1:
        raise WordParseError(f"expected a generator, got '{label}'",
                             text=text, line=line, column=column)
    return word.letters[0]


def parse_move(text, presentation, line=1):
    '''
    Parse one serialized move such as "rmul a B" or "inner abA".
    '''
    tokens = text.split()
    if not tokens:
        raise WordParseError("empty move", text=text, line=line)
    name, args = tokens[0], tokens[1:]
    column = text.index(name) + 1
    arg_column = [text.index(a) + 1 for a in args]

    def letter(k):
        return _factor_from_label(args[k], presentation, text, line,
                                  arg_column[k])

    expected = {'invert': 1, 'swap': 2, 'rmul': 2, 'conj_factor': 2,
                'permute': 2, 'inner': 1}
    if name not in expected:
        raise WordParseError(f"unknown move '{name}'", text=text, line=line,
                             column=column)
    if len(args) != expected[name]:
        raise WordParseError(f"move '{name}' takes {expected[name]} "
                             "argument(s)", text=text, line=line,
                             column=column)

    match name:
        case 'invert':
            move = InvertGenerator(letter(0).factor)
        case 'swap':
            move = SwapGenerators(letter(0).factor, letter(1).factor)
        case 'rmul':
            source = letter(1)
            move = RightMultiply(letter(0).factor, source.factor,
                                 source.exponent)
        case 'conj_factor':
            move = ConjugateFactor(letter(0).factor,
                                   parse_word(args[1], presentation, line))
        case 'permute':
            move = PermuteFactors(letter(0).factor, letter(1).factor)
        case 'inner':
            move = InnerConjugation(parse_word(args[0], presentation, line))
    try:
        move.validate(presentation)
    except PresentationError as e:
        raise WordParseError(str(e), text=text, line=line,
                             column=column) from e
    return move


def parse_automorphism(text, presentation):
    '''
    Parse a move list, one move per line; blank lines and '#' comments are
    skipped and "id" stands for the empty list.
    '''
    moves = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.split('#', 1)[0].strip()
        if not stripped or stripped == 'id':
            continue
        moves.append(parse_move(stripped, presentation, line=line_number))
    return Automorphism(presentation, tuple(moves))


def nielsen_moves(presentation):
    '''
    The elementary Nielsen moves on the free part of a presentation.
    '''
    n = presentation.free_rank
    moves = [InvertGenerator(i) for i in range(n)]
    moves += [SwapGenerators(i, j) for i in range(n) for j in range(i + 1, n)]
    moves += [RightMultiply(i, j, p)
              for i in range(n) for j in range(n) if i != j
              for p in (1, -1)]
    return moves


def nielsen_pool(presentation, max_length) -> list:
    '''
    All automorphisms reachable by at most max_length Nielsen moves,
    deduplicated by their action on the generators, in breadth-first order.
    '''
    moves = nielsen_moves(presentation)
    identity = Automorphism.identity(presentation)
    generators = tuple(presentation.generators())
    seen = {generators}
    pool = [identity]
    frontier = [(identity, generators)]

    for _ in range(max_length):
        next_frontier = []
        for automorphism, images in frontier:
            for move in moves:
                move_images = move.images(presentation)
                new_images = tuple(move.apply(w, move_images) for w in images)
                if new_images in seen:
                    continue
                seen.add(new_images)
                extended = automorphism.then(move)
                pool.append(extended)
                next_frontier.append((extended, new_images))
        frontier = next_frontier
    return pool


def inner_pool(presentation, max_length) -> list:
    '''
    The inner automorphisms ad_w for every word w of length at most
    max_length.
    '''
    return [Automorphism.inner(w)
            for w in words_up_to_length(presentation, max_length)]


def deduplicate_pool(automorphisms: Iterable[Automorphism]):
    '''
    Drop automorphisms acting like an earlier one on the generators.
    '''
    seen = set()
    unique = []
    for automorphism in automorphisms:
        key = automorphism.generator_images()
        if key not in seen:
            seen.add(key)
            unique.append(automorphism)
    return unique
