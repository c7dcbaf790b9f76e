from __future__ import annotations

import re
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional

from tree_actions.errors import (
    PresentationError,
    PreconditionError,
    WordParseError
)

FREE_ALPHABET = 'abcdefghijklmnopqrtuvwxyz'
'''Letters of the free generators, without 's' which starts finite-factor
tokens such as s1^2.'''
MAX_FREE_RANK = len(FREE_ALPHABET)

DEFAULT_CLOSURE_SEARCH_BOUND = 12

_FACTOR_TOKEN = re.compile(r'^(Z|F)(?:/)?(\d*)$')


@dataclass(frozen=True)
class GroupPresentation:
    '''
    A free product of free_rank copies of Z and finite cyclic groups.

    Factors are indexed 0..free_rank-1 for the copies of Z, followed by one
    index per entry of finite_orders. The pure free group F_n is the
    presentation with free_rank n and no finite factors.
    '''
    free_rank: int = 0
    finite_orders: tuple = ()

    def __post_init__(self):
        try:
            orders = tuple(int(m) for m in self.finite_orders)
        except (TypeError, ValueError) as e:
            raise PresentationError(f"invalid finite orders: {e}") from e
        object.__setattr__(self, 'finite_orders', orders)

        if self.free_rank < 0:
            raise PresentationError("free rank must be nonnegative")
        if self.free_rank > MAX_FREE_RANK:
            raise PresentationError(
                f"free rank above {MAX_FREE_RANK} is not supported")
        if self.free_rank + len(orders) < 1:
            raise PresentationError("presentation needs at least one factor")
        for m in orders:
            if m < 2:
                raise PresentationError(f"finite order {m} must be at least 2")

    @classmethod
    def free(cls, rank):
        return cls(free_rank=rank, finite_orders=())

    @classmethod
    def parse(cls, text):
        '''
        Parse a presentation such as "F2", "Z*Z", "Z2*Z3" or "F2*Z/3".

        "Z" alone is a copy of the integers, "Zm" or "Z/m" a cyclic group of
        order m and "Fn" a free group of rank n.
        '''
        free_rank = 0
        finite_orders = []
        for column, token in _split_tokens(text.replace(' ', ''), '*'):
            match = _FACTOR_TOKEN.match(token)
            if match is None:
                raise WordParseError(f"invalid factor '{token}'",
                                     text=text, column=column)
            kind, digits = match.groups()
            if kind == 'F':
                free_rank += int(digits) if digits else 1
            elif digits:
                finite_orders.append(int(digits))
            else:
                free_rank += 1
        return cls(free_rank=free_rank, finite_orders=tuple(finite_orders))

    @property
    def num_factors(self):
        return self.free_rank + len(self.finite_orders)

    @property
    def is_free(self):
        return not self.finite_orders

    def order(self, factor):
        '''
        Return 0 for a copy of Z and the order m for a finite factor.
        '''
        if factor < self.free_rank:
            return 0
        return self.finite_orders[factor - self.free_rank]

    def is_free_factor(self, factor):
        return 0 <= factor < self.free_rank

    def alphabet(self):
        '''
        All valid letters, free generators with their inverses first.
        '''
        letters = []
        for i in range(self.free_rank):
            letters.append(Letter(i, 1))
            letters.append(Letter(i, -1))
        for k, m in enumerate(self.finite_orders):
            for e in range(1, m):
                letters.append(Letter(self.free_rank + k, e))
        return letters

    def generators(self):
        return [ReducedWord(self, (Letter(i, 1),))
                for i in range(self.num_factors)]

    def identity(self):
        return ReducedWord(self, ())

    def word(self, text):
        return parse_word(text, self)

    def validate_letter(self, letter):
        factor, exponent = letter
        if not 0 <= factor < self.num_factors:
            raise PresentationError(
                f"factor index {factor} not in presentation {self}")
        m = self.order(factor)
        if m == 0:
            if exponent not in (1, -1):
                raise PresentationError(
                    f"free letter exponent {exponent} must be +1 or -1")
        elif not 1 <= exponent < m:
            raise PresentationError(
                f"exponent {exponent} invalid for factor of order {m}")
        return Letter(factor, exponent)

    def inverse_letter(self, letter):
        m = self.order(letter.factor)
        if m == 0:
            return Letter(letter.factor, -letter.exponent)
        return Letter(letter.factor, m - letter.exponent)

    def format_letter(self, letter):
        factor, exponent = letter
        if factor < self.free_rank:
            symbol = FREE_ALPHABET[factor]
            return symbol if exponent == 1 else symbol.upper()
        token = f"s{factor - self.free_rank + 1}"
        return token if exponent == 1 else f"{token}^{exponent}"

    def __str__(self):
        if self.is_free:
            return f"F{self.free_rank}"
        parts = ['Z'] * self.free_rank
        parts += [f"Z{m}" for m in self.finite_orders]
        return '*'.join(parts)


class Letter(NamedTuple):
    factor: int
    exponent: int


@dataclass(frozen=True)
class ReducedWord:
    '''
    A word in normal form over a GroupPresentation.

    Free letters have exponent +1 or -1 and never sit next to their inverse.
    Letters of a finite factor carry packed exponents and never sit next to
    another letter of the same factor. The empty word is the identity.
    Instances are built by reduce() or by group operations, never by hand.
    '''
    presentation: GroupPresentation
    letters: tuple = ()

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return ReducedWord(self.presentation, self.letters[key])
        return self.letters[key]

    def __mul__(self, other):
        if not isinstance(other, ReducedWord):
            return NotImplemented
        _check_same(self.presentation, other.presentation)
        return ReducedWord(
            self.presentation,
            push_letters(list(self.letters), other.letters,
                         self.presentation)
        )

    def __invert__(self):
        return self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.presentation.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"ReducedWord('{format_word(self)}', {self.presentation})"

    def inverse(self):
        inv = self.presentation.inverse_letter
        return ReducedWord(self.presentation,
                           tuple(inv(x) for x in reversed(self.letters)))

    def conjugate(self, by):
        '''
        Return by * self * by^-1.
        '''
        return by * self * by.inverse()

    @property
    def is_identity(self):
        return not self.letters

    def syllables(self):
        '''
        Split the word into maximal runs of letters of one factor.
        '''
        runs = []
        for letter in self.letters:
            if runs and runs[-1][0] == letter.factor:
                runs[-1][1].append(letter)
            else:
                runs.append((letter.factor, [letter]))
        return [(factor, tuple(run)) for factor, run in runs]

    def syllable_length(self):
        return len(self.syllables())

    def sort_key(self):
        '''
        Shortlex key: shorter first, then letters in alphabet order.
        '''
        return (len(self.letters),
                tuple(_letter_key(x) for x in self.letters))


class Membership(NamedTuple):
    '''
    Answer of an elementary closure query.

    search_bound is None when the answer is exact and the exponent bound of
    the search otherwise.
    '''
    member: bool
    search_bound: Optional[int] = None

    def __bool__(self):
        return self.member


@dataclass(frozen=True)
class ElementaryClosure:
    '''
    The maximal virtually cyclic subgroup E(g), described by its root.

    For free groups E(g) is exactly the cyclic group generated by root. With
    finite factors E(g) may be a finite extension, which is flagged but not
    enumerated.
    '''
    root: ReducedWord
    may_have_finite_extension: bool = False


def _letter_key(letter):
    if letter.exponent < 0:
        return (letter.factor, 1)
    if letter.exponent == 1:
        return (letter.factor, 0)
    return (letter.factor, letter.exponent)


def _check_same(left, right):
    if left != right:
        raise PresentationError(
            f"presentation mismatch: {left} and {right}")


def _split_tokens(text, separator):
    column = 1
    for token in text.split(separator):
        yield column, token
        column += len(token) + 1


def push_letters(stack, letters, presentation):
    # stack holds a reduced word; push letters one at a time
    for letter in letters:
        if stack and stack[-1].factor == letter.factor:
            top = stack[-1]
            m = presentation.order(letter.factor)
            if m == 0:
                if top.exponent == -letter.exponent:
                    stack.pop()
                else:
                    stack.append(letter)
            else:
                stack.pop()
                exponent = (top.exponent + letter.exponent) % m
                if exponent:
                    stack.append(Letter(letter.factor, exponent))
        else:
            stack.append(letter)
    return tuple(stack)


def reduce(letters: Iterable, presentation: GroupPresentation) -> ReducedWord:
    '''
    Bring a raw sequence of letters into normal form.

    Parameters
    ----------
    letters: Iterable[Letter or (factor, exponent)]
        Raw letters, each valid for its factor
    presentation: GroupPresentation
        The presentation the letters belong to

    Returns
    -------
    ReducedWord
        The normal form of the product of the letters

    Raises
    ------
    PresentationError
        If a letter references an invalid factor or exponent
    '''
    validated = [presentation.validate_letter(x) for x in letters]
    return ReducedWord(presentation,
                       push_letters([], validated, presentation))


def format_word(word: ReducedWord) -> str:
    if word.is_identity:
        return '1'
    fmt = word.presentation.format_letter
    return ''.join(fmt(x) for x in word.letters)


def parse_word(text: str, presentation: GroupPresentation,
               line: int = 1) -> ReducedWord:
    '''
    Parse an ASCII word such as "abAB", "s1s2^2" or "a^3B".

    Lowercase letters are free generators and uppercase letters their
    inverses. Finite-factor letters are written s<k> with an optional ^e.
    Free letters accept ^n for repeated letters. "1" is the identity and
    whitespace is ignored.
    '''
    letters = []
    position = 0
    stripped = text.strip()
    if stripped in ('', '1'):
        return presentation.identity()

    while position < len(text):
        char = text[position]
        column = position + 1

        if char.isspace():
            position += 1
            continue

        if char == 's' and position + 1 < len(text) and \
                text[position + 1].isdigit():
            match = re.match(r's(\d+)(?:\^(-?\d+))?', text[position:])
            index = int(match.group(1))
            if not 1 <= index <= len(presentation.finite_orders):
                raise WordParseError(f"unknown finite factor 's{index}'",
                                     text=text, line=line, column=column)
            m = presentation.finite_orders[index - 1]
            exponent = int(match.group(2)) if match.group(2) else 1
            exponent %= m
            if exponent:
                letters.append(
                    Letter(presentation.free_rank + index - 1, exponent))
            position += match.end()
            continue

        if char.isalpha() and char.lower() in FREE_ALPHABET:
            factor = FREE_ALPHABET.index(char.lower())
            if factor >= presentation.free_rank:
                raise WordParseError(
                    f"generator '{char}' not in {presentation}",
                    text=text, line=line, column=column)
            sign = 1 if char.islower() else -1
            position += 1
            count = 1
            match = re.match(r'\^(-?\d+)', text[position:])
            if match:
                count = int(match.group(1))
                position += match.end()
            if count < 0:
                sign, count = -sign, -count
            letters.extend([Letter(factor, sign)] * count)
            continue

        raise WordParseError(f"unexpected character '{char}'",
                             text=text, line=line, column=column)

    return reduce(letters, presentation)


def parse_words(text: str, presentation: GroupPresentation) -> list:
    '''
    Parse one word per non-empty line, ignoring lines starting with '#'.
    '''
    words = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith('#'):
            continue
        words.append(parse_word(line, presentation, line=line_number))
    return words


def cyclic_reduce(w: ReducedWord):
    '''
    Peel matching ends off w at the letter level.

    Returns (core, conjugator) with w = conjugator * core * conjugator^-1.
    Free ends are peeled when they are mutually inverse. Finite ends of the
    same factor are merged into a single letter at the end of the core.
    '''
    presentation = w.presentation
    letters = w.letters
    i, j = 0, len(letters) - 1
    peeled = []
    core_letters = None

    while j > i:
        first, last = letters[i], letters[j]
        if first.factor != last.factor:
            break
        m = presentation.order(first.factor)
        if m == 0:
            if first.exponent != -last.exponent:
                break
            peeled.append(first)
            i += 1
            j -= 1
            continue
        exponent = (first.exponent + last.exponent) % m
        peeled.append(first)
        if exponent == 0:
            i += 1
            j -= 1
            continue
        # w = c x M y c^-1 = (c x) (M y x) (c x)^-1
        core_letters = letters[i + 1:j] + (Letter(first.factor, exponent),)
        break

    if core_letters is None:
        core_letters = letters[i:j + 1]

    return (ReducedWord(presentation, tuple(core_letters)),
            ReducedWord(presentation, tuple(peeled)))


def cyclic_reduce_syllables(w: ReducedWord):
    '''
    Cyclically reduce w at the syllable level.

    On top of cyclic_reduce, a trailing run of a free factor is rotated to
    the front when the core starts with the same factor, so the first and
    last syllables of the returned core lie in different factors unless the
    core is a single syllable.
    '''
    core, conjugator = cyclic_reduce(w)
    syllables = core.syllables()
    if len(syllables) > 1 and syllables[0][0] == syllables[-1][0]:
        tail = ReducedWord(w.presentation, syllables[-1][1])
        core = tail * core[:len(core) - len(tail)]
        conjugator = conjugator * tail.inverse()
    return core, conjugator


def cyclic_length(w: ReducedWord) -> int:
    return len(cyclic_reduce(w)[0])


def is_cyclically_reduced(w: ReducedWord) -> bool:
    return cyclic_reduce(w)[1].is_identity


def has_finite_order(w: ReducedWord) -> bool:
    if w.is_identity:
        return False
    core, _ = cyclic_reduce_syllables(w)
    syllables = core.syllables()
    return len(syllables) == 1 and \
        w.presentation.order(syllables[0][0]) != 0


def root(w: ReducedWord):
    '''
    Return (root, exponent) with w = root ** exponent and exponent maximal.

    Raises
    ------
    PreconditionError
        If w is the identity or has finite order
    '''
    if w.is_identity:
        raise PreconditionError("the identity has no root")
    if has_finite_order(w):
        raise PreconditionError(f"'{w}' has finite order")

    core, conjugator = cyclic_reduce_syllables(w)
    letters = core.letters
    n = len(letters)
    for period in range(1, n + 1):
        if n % period == 0 and letters == letters[:period] * (n // period):
            break
    base = core[:period]
    return base.conjugate(conjugator), n // period


def elementary_closure(g: ReducedWord) -> ElementaryClosure:
    r, _ = root(g)
    return ElementaryClosure(
        root=r,
        may_have_finite_extension=not g.presentation.is_free
    )


def in_elementary_closure(h: ReducedWord, g: ReducedWord,
                          search_bound: int = DEFAULT_CLOSURE_SEARCH_BOUND
                          ) -> Membership:
    '''
    Decide whether h g^n h^-1 = g^m for some nonzero n and m.

    For free groups the answer is exact: h lies in E(g) iff h is a power of
    root(g). With finite factors a bounded search over 0 < n <= search_bound
    and m = +n or -n is performed (translation lengths force |m| = |n|) and
    the bound is returned with the answer.

    Raises
    ------
    PreconditionError
        If g is the identity or has finite order
    '''
    _check_same(h.presentation, g.presentation)
    if g.is_identity:
        raise PreconditionError("E(g) is undefined for the identity")
    r, _ = root(g)

    if h.is_identity:
        return Membership(True, None if g.presentation.is_free
                          else search_bound)

    if g.presentation.is_free:
        hr, _ = root(h)
        return Membership(hr == r or hr == r.inverse())

    g_inverse = g.inverse()
    h_inverse = h.inverse()
    power = g.presentation.identity()
    inverse_power = g.presentation.identity()
    for _ in range(search_bound):
        power = power * g
        inverse_power = inverse_power * g_inverse
        conjugate = h * power * h_inverse
        if conjugate == power or conjugate == inverse_power:
            return Membership(True, search_bound)
    return Membership(False, search_bound)


def letter_allowed_after(previous: Letter, letter: Letter,
                         presentation: GroupPresentation) -> bool:
    '''
    True when previous followed by letter is already in normal form.
    '''
    if previous.factor != letter.factor:
        return True
    return presentation.order(letter.factor) == 0 and \
        previous.exponent == letter.exponent


def random_word(presentation: GroupPresentation, length: int,
                rng: random.Random, cyclically_reduced: bool = False,
                max_attempts: int = 1000) -> ReducedWord:
    '''
    Draw a uniformly built random reduced word with exactly length letters.
    '''
    alphabet = presentation.alphabet()
    if length == 0:
        return presentation.identity()
    for _ in range(max_attempts):
        letters = [rng.choice(alphabet)]
        while len(letters) < length:
            options = [x for x in alphabet
                       if letter_allowed_after(letters[-1], x, presentation)]
            letters.append(rng.choice(options))
        if cyclically_reduced and length > 1 and \
                not letter_allowed_after(letters[-1], letters[0],
                                         presentation):
            continue
        return ReducedWord(presentation, tuple(letters))
    raise PreconditionError(
        f"could not draw a cyclically reduced word of length {length} "
        f"in {presentation}")


def words_up_to_length(presentation: GroupPresentation,
                       max_length: int) -> Iterator[ReducedWord]:
    '''
    Enumerate every reduced word of length at most max_length in shortlex
    order, starting with the identity.
    '''
    alphabet = presentation.alphabet()
    layer = [()]
    yield presentation.identity()
    for _ in range(max_length):
        next_layer = []
        for letters in layer:
            for x in alphabet:
                if letters and not letter_allowed_after(letters[-1], x,
                                                        presentation):
                    continue
                extended = letters + (x,)
                next_layer.append(extended)
                yield ReducedWord(presentation, extended)
        layer = next_layer
