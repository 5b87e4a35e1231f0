"""Words in right-angled Artin groups.

A letter is a pair ``(generator, sign)`` with sign +1 or -1; a word is a
tuple of letters.  Two letters commute when their generators span an edge of
the defining graph.  Everything here works on plain tuples so words can be
hashed, sliced and compared directly.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, NamedTuple, Sequence

from . import BudgetExceeded, CubistError, InputError
from .graph_core import SimplicialGraph, vertex_key, vertex_name

Letter = tuple
Word = tuple
EMPTY: Word = ()


class CertificateError(CubistError):
    """A move certificate does not replay."""


class RaagPresentation:
    """The RAAG of a simple graph, with a total order on its generators."""

    def __init__(self, graph: SimplicialGraph, order: Sequence | None = None):
        self.graph = graph
        if order is None:
            order = graph.vertices
        order = tuple(order)
        if sorted(order, key=vertex_key) != list(graph.vertices):
            raise InputError("generator order must list every vertex exactly once")
        self.generators = order
        self.rank = {g: i for i, g in enumerate(order)}
        self._names = {vertex_name(g): g for g in order}
        if len(self._names) != len(order):
            raise InputError("generator names are not distinct")

    def __repr__(self) -> str:
        return f"RaagPresentation({len(self.generators)} generators, {len(self.graph.edges)} commutations)"

    def commutes(self, u: Hashable, v: Hashable) -> bool:
        return self.graph.has_edge(u, v)

    def letter_key(self, letter: Letter) -> tuple:
        """Generator order first, then ``+`` before ``-``."""
        return (self.rank[letter[0]], 0 if letter[1] > 0 else 1)

    def letters(self) -> list:
        return [(g, s) for g in self.generators for s in (1, -1)]

    def check(self, w: Word) -> Word:
        for g, s in w:
            if g not in self.rank or s not in (1, -1):
                raise InputError(f"bad letter {(g, s)!r}")
        return tuple(w)

    def parse(self, text: str) -> Word:
        """Parse ``"a b^-1 c"``; generators are looked up by their display name."""
        out = []
        for tok in text.split():
            name, caret, exp = tok.rpartition("^")
            if not caret:
                name, exp = tok, "1"
            if name not in self._names:
                raise InputError(f"unknown generator {name!r}")
            try:
                power = int(exp)
            except ValueError:
                raise InputError(f"bad exponent in {tok!r}") from None
            if power == 0:
                continue
            sign = 1 if power > 0 else -1
            out.extend([(self._names[name], sign)] * abs(power))
        return tuple(out)

    def format(self, w: Word) -> str:
        return " ".join(vertex_name(g) + ("" if s > 0 else "^-1") for g, s in w)


def inverse(w: Word) -> Word:
    return tuple((g, -s) for g, s in reversed(w))


def commutator(x: Word, y: Word) -> Word:
    return x + y + inverse(x) + inverse(y)


def free_reduce(w: Word) -> Word:
    out: list = []
    for g, s in w:
        if out and out[-1] == (g, -s):
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


# move certificates ------------------------------------------------------------

class Move(NamedTuple):
    """``insert`` puts ``letter letter^-1`` at ``position``; ``delete`` removes
    the inverse pair at ``position, position+1``; ``commute`` swaps them."""

    kind: str
    position: int
    letter: Letter | None = None


@dataclass(frozen=True)
class MoveCertificate:
    start: Word
    end: Word
    moves: tuple = field(default=())

    def replay(self, presentation: RaagPresentation) -> Word:
        """Apply every move, validating it; returns the end word or raises."""
        word = list(self.start)
        for step, move in enumerate(self.moves):
            p = move.position
            if move.kind == "insert":
                if move.letter is None or not 0 <= p <= len(word):
                    raise CertificateError(f"step {step}: bad insertion {move}")
                g, s = move.letter
                presentation.check(((g, s),))
                word[p:p] = [(g, s), (g, -s)]
            elif move.kind == "delete":
                if not 0 <= p < len(word) - 1:
                    raise CertificateError(f"step {step}: deletion out of range")
                (g, s), (h, t) = word[p], word[p + 1]
                if g != h or s != -t:
                    raise CertificateError(f"step {step}: {word[p]} {word[p + 1]} do not cancel")
                del word[p:p + 2]
            elif move.kind == "commute":
                if not 0 <= p < len(word) - 1:
                    raise CertificateError(f"step {step}: commutation out of range")
                if not presentation.commutes(word[p][0], word[p + 1][0]):
                    raise CertificateError(
                        f"step {step}: {word[p][0]!r} and {word[p + 1][0]!r} do not commute"
                    )
                word[p], word[p + 1] = word[p + 1], word[p]
            else:
                raise CertificateError(f"step {step}: unknown move {move.kind!r}")
        if tuple(word) != self.end:
            raise CertificateError("replay does not reach the claimed end word")
        return tuple(word)

    def counts(self) -> Counter:
        return Counter(m.kind for m in self.moves)


# reduction and normal forms ---------------------------------------------------

def _cancel_partner(P: RaagPresentation, word: Sequence, j: int) -> int:
    """Largest ``i < j`` whose letter cancels ``word[j]`` across commuting letters, or -1."""
    g, s = word[j]
    for i in range(j - 1, -1, -1):
        h, t = word[i]
        if h == g:
            return i if t == -s else -1
        if not P.commutes(g, h):
            return -1
    return -1


def delta_reduce(P: RaagPresentation, w: Word) -> tuple[Word, MoveCertificate]:
    """Cancel pairs ``u^e ... u^-e`` whose middle commutes with ``u``.

    Pairs are taken leftmost first (smallest right end, then the nearest left
    end).  The certificate moves the left letter rightwards by commutations
    and then deletes the now-adjacent pair.
    """
    start = P.check(w)
    word = list(start)
    moves = []
    j = 0
    while j < len(word):
        i = _cancel_partner(P, word, j)
        if i < 0:
            j += 1
            continue
        for p in range(i, j - 1):
            moves.append(Move("commute", p))
            word[p], word[p + 1] = word[p + 1], word[p]
        moves.append(Move("delete", j - 1))
        del word[j - 1:j + 1]
        j = i
    result = tuple(word)
    return result, MoveCertificate(start, result, tuple(moves))


def is_delta_reduced(P: RaagPresentation, w: Word) -> bool:
    """Literal check: no ``i < j`` with cancelling letters and a commuting middle."""
    for i, j in itertools.combinations(range(len(w)), 2):
        (g, s), (h, t) = w[i], w[j]
        if g == h and s == -t and all(P.commutes(g, x) for x, _ in w[i + 1:j]):
            return False
    return True


def shuffle_normal_form(P: RaagPresentation, w: Word) -> Word:
    """Least word, letter by letter, among those equal to ``w`` up to commutations."""
    rest = list(w)
    out = []
    while rest:
        best = None
        seen: list = []
        for p, (g, s) in enumerate(rest):
            if all(P.commutes(g, h) for h in seen):
                if best is None or P.letter_key((g, s)) < P.letter_key(rest[best]):
                    best = p
            seen.append(g)
        out.append(rest.pop(best))
    return tuple(out)


def normal_form(P: RaagPresentation, w: Word) -> Word:
    return shuffle_normal_form(P, delta_reduce(P, w)[0])


def words_equal(P: RaagPresentation, w1: Word, w2: Word) -> bool:
    return normal_form(P, w1) == normal_form(P, w2)


def is_trivial(P: RaagPresentation, w: Word) -> bool:
    return not delta_reduce(P, w)[0]


@dataclass(frozen=True)
class NonTrivial:
    word: Word
    normal_form: Word


def identity_certificate(P: RaagPresentation, w: Word) -> MoveCertificate | NonTrivial:
    """Moves taking ``w`` to the empty word, or a verdict that it is not trivial."""
    reduced, cert = delta_reduce(P, w)
    if reduced:
        return NonTrivial(tuple(w), shuffle_normal_form(P, reduced))
    cert.replay(P)
    return cert


# conjugacy ---------------------------------------------------------------------

def cyclic_delta_reduce(P: RaagPresentation, w: Word) -> Word:
    """A conjugate of ``w`` none of whose cyclic permutations admits a reduction."""
    word = delta_reduce(P, w)[0]
    changed = True
    while changed:
        changed = False
        for r in range(1, len(word)):
            shorter = delta_reduce(P, word[r:] + word[:r])[0]
            if len(shorter) < len(word):
                word = shorter
                changed = True
                break
    return word


def is_cyclically_delta_reduced(P: RaagPresentation, w: Word) -> bool:
    return all(is_delta_reduced(P, w[r:] + w[:r]) for r in range(max(len(w), 1)))


def _movable_to_front(P: RaagPresentation, w: Word) -> list[int]:
    seen: list = []
    found = []
    for p, (g, _) in enumerate(w):
        if all(P.commutes(g, h) for h in seen):
            found.append(p)
        seen.append(g)
    return found


def cyclic_class(P: RaagPresentation, w: Word, stop: Word | None = None) -> set:
    """Normal forms reachable from a cyclically reduced ``w`` by rotations and commutations.

    Rotating a representative sends its first letter to the back, and the
    possible first letters are exactly those that commute past everything in
    front of them, so the search only moves those.
    """
    start = shuffle_normal_form(P, w)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == stop:
            break
        for p in _movable_to_front(P, cur):
            nxt = shuffle_normal_form(P, cur[:p] + cur[p + 1:] + (cur[p],))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


@lru_cache(maxsize=1 << 16)
def _cyclic_core(P: RaagPresentation, w: Word) -> Word:
    return shuffle_normal_form(P, cyclic_delta_reduce(P, w))


def conjugate(P: RaagPresentation, w1: Word, w2: Word) -> bool:
    """Decide conjugacy through cyclic equivalence of cyclically reduced forms."""
    a = _cyclic_core(P, P.check(w1))
    b = _cyclic_core(P, P.check(w2))
    if len(a) != len(b) or Counter(a) != Counter(b):
        return False
    if a == b:
        return True
    return b in cyclic_class(P, a, stop=b)


# expressions --------------------------------------------------------------------

Expression = tuple  # of (generator, nonzero exponent)


def to_expression(w: Word) -> Expression:
    """Group a word into syllables, amalgamating neighbours left to right."""
    out: list = []
    for g, s in w:
        if out and out[-1][0] == g:
            k = out[-1][1] + s
            if k:
                out[-1] = (g, k)
            else:
                out.pop()
        else:
            out.append((g, s))
    return tuple(out)


def expression_to_word(x: Expression) -> Word:
    return tuple((g, 1 if k > 0 else -1) for g, k in x for _ in range(abs(k)))


def reduce_expression(P: RaagPresentation, x: Expression) -> Expression:
    """Shuffle same-generator syllables together and amalgamate until none can meet."""
    syl = [(g, k) for g, k in x if k]
    merged = True
    while merged:
        merged = False
        for j in range(len(syl)):
            g = syl[j][0]
            for i in range(j - 1, -1, -1):
                h = syl[i][0]
                if h == g:
                    k = syl[i][1] + syl[j][1]
                    del syl[j]
                    if k:
                        syl[i] = (g, k)
                    else:
                        del syl[i]
                    merged = True
                    break
                if not P.commutes(g, h):
                    break
            if merged:
                break
        if merged:
            syl = list(to_expression(expression_to_word(syl)))
    return tuple(syl)


def syllable_length(x: Expression) -> int:
    return len(x)


def ends_in(P: RaagPresentation, x: Expression, generator: Hashable) -> bool:
    """Whether some syllable of ``generator`` can be shuffled to the front."""
    for g, _ in reduce_expression(P, x):
        if g == generator:
            return True
        if not P.commutes(g, generator):
            return False
    return False


# x^2 y^2 = z^2 ---------------------------------------------------------------------

@dataclass(frozen=True)
class SquareSolution:
    x: Word
    y: Word
    z: Word
    commuting: bool


def reduced_elements(P: RaagPresentation, max_len: int) -> list[Word]:
    """Normal forms of all elements of word length at most ``max_len``."""
    found = {EMPTY}
    frontier = [EMPTY]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for letter in P.letters():
                cand = w + (letter,)
                if is_delta_reduced(P, cand):
                    nf = shuffle_normal_form(P, cand)
                    if nf not in found:
                        found.add(nf)
                        nxt.append(nf)
        frontier = nxt
    return sorted(found, key=lambda w: (len(w), [P.letter_key(a) for a in w]))


def search_square_relation(
    P: RaagPresentation, max_len: int, budget: int = 200_000
) -> list[SquareSolution]:
    """All ``(x, y, z)`` of length at most ``max_len`` with ``x^2 y^2 = z^2``.

    Each triple comes with the outcome of checking that ``x``, ``y`` and ``z``
    pairwise commute.
    """
    letters = 2 * len(P.generators)
    candidates = sum(letters ** k for k in range(max_len + 1))
    if candidates > budget:
        raise BudgetExceeded(f"{candidates} candidate words exceed the budget of {budget}")
    elements = reduced_elements(P, max_len)
    squares: dict = {}
    for z in elements:
        squares.setdefault(normal_form(P, z + z), []).append(z)
    out = []
    for x in elements:  # rows are independent; split here to parallelise
        for y in elements:
            for z in squares.get(normal_form(P, x + x + y + y), ()):
                ok = all(
                    is_trivial(P, commutator(a, b)) for a, b in ((x, y), (x, z), (y, z))
                )
                out.append(SquareSolution(x, y, z, ok))
    return out


def all_words(P: RaagPresentation, max_len: int) -> Iterable[Word]:
    letters = P.letters()
    for k in range(max_len + 1):
        yield from itertools.product(letters, repeat=k)
