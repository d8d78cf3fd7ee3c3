"""The formal word language: symbols, letters, words, combinations.

Symbols are x_j (sign +) and y_j (sign -).  A letter is either a symbol or a
bracketed triple [a b c] whose outer entries share a sign opposite to the
middle entry; all symbols inside one letter are distinct.  A word is a
sequence of letters in which every symbol occurs at most once and x_j occurs
iff y_j does.

Letters are plain nested tuples: a leaf is (sign, index), a triple is
(sign, left, mid, right).  This keeps them hashable and cheap, which the
rewrite engine leans on heavily.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

PLUS = 1
MINUS = -1

_SIGN_CHAR = {PLUS: "x", MINUS: "y"}
_CHAR_SIGN = {"x": PLUS, "y": MINUS}


# ---------------------------------------------------------------------------
# letters
# ---------------------------------------------------------------------------

def leaf(sign: int, index: int):
    if sign not in (PLUS, MINUS):
        raise ValueError("sign must be +1 or -1")
    if index < 1:
        raise ValueError("symbol index must be positive")
    return (sign, index)


def is_leaf(letter) -> bool:
    return len(letter) == 2


def sgn(letter) -> int:
    return letter[0]


def letter_symbols(letter):
    """Symbols of a letter as (sign, index) pairs, in structural scan order."""
    if is_leaf(letter):
        yield letter
    else:
        for child in letter[1:]:
            yield from letter_symbols(child)


def letter_size(letter) -> int:
    if is_leaf(letter):
        return 1
    return sum(letter_size(child) for child in letter[1:])


def make_triple(left, mid, right):
    """Bracket letter [left mid right]; outer signs agree and differ from the middle."""
    if sgn(left) != sgn(right):
        raise ValueError("outer letters of a triple must have equal sign")
    if sgn(mid) == sgn(left):
        raise ValueError("middle letter of a triple must have the opposite sign")
    seen = set()
    for part in (left, mid, right):
        for s in letter_symbols(part):
            if s in seen:
                raise ValueError(f"symbol {symbol_text(s)} repeated inside a letter")
            seen.add(s)
    return (sgn(left), left, mid, right)


@lru_cache(maxsize=1 << 16)
def letter_key(letter):
    """Total-order key: (size, sign slot, sorted symbol multiset, structure)."""
    syms = tuple(sorted((i, 0 if s == PLUS else 1) for s, i in letter_symbols(letter)))
    if is_leaf(letter):
        return (1, 0 if letter[0] == PLUS else 1, syms, letter[1])
    return (
        letter_size(letter),
        0 if letter[0] == PLUS else 1,
        syms,
        letter_key(letter[1]),
        letter_key(letter[2]),
        letter_key(letter[3]),
    )


def symbol_text(symbol) -> str:
    return f"{_SIGN_CHAR[symbol[0]]}{symbol[1]}"


def letter_text(letter) -> str:
    if is_leaf(letter):
        return symbol_text(letter)
    return "[" + " ".join(letter_text(c) for c in letter[1:]) + "]"


def relabel_letter(letter, mapping):
    if is_leaf(letter):
        return (letter[0], mapping.get(letter[1], letter[1]))
    return (letter[0],) + tuple(relabel_letter(c, mapping) for c in letter[1:])


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Word:
    """A sequence of letters over the m-pair alphabet."""

    letters: tuple
    m: int

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def text(self) -> str:
        return " ".join(letter_text(let) for let in self.letters)

    def symbols(self):
        for let in self.letters:
            yield from letter_symbols(let)

    def validate(self) -> "Word":
        seen = set()
        for s, i in self.symbols():
            if i > self.m:
                raise ValueError(f"symbol index {i} exceeds m={self.m}")
            if i < 1:
                raise ValueError("symbol index must be positive")
            if (s, i) in seen:
                raise ValueError(f"symbol {symbol_text((s, i))} occurs twice")
            seen.add((s, i))
        for _, i in list(seen):
            if ((PLUS, i) in seen) != ((MINUS, i) in seen):
                missing = "y" if (PLUS, i) in seen else "x"
                raise ValueError(f"unmatched pair: {missing}{i} is missing")
        for let in self.letters:
            _validate_letter(let)
        return self

    def __repr__(self):
        return f"Word({self.text!r}, m={self.m})"


def _validate_letter(letter):
    if is_leaf(letter):
        return
    _, left, mid, right = letter
    if sgn(left) != sgn(right) or sgn(mid) == sgn(left) or letter[0] != sgn(left):
        raise ValueError(f"sign pattern violated in {letter_text(letter)}")
    for child in (left, mid, right):
        _validate_letter(child)


def word(letters, m: int) -> Word:
    return Word(tuple(letters), m).validate()


def j_set(w: Word) -> frozenset:
    """Indices j whose pair x_j, y_j occurs in the word."""
    return frozenset(i for s, i in w.symbols() if s == PLUS)


def laplacian_word(m: int) -> Word:
    """y1 ... ym x1 ... xm, the word realizing the order-2m higher Laplacian."""
    if m < 1:
        raise ValueError("m must be >= 1")
    letters = [leaf(MINUS, j) for j in range(1, m + 1)] + [leaf(PLUS, j) for j in range(1, m + 1)]
    return Word(tuple(letters), m)


# ---------------------------------------------------------------------------
# parsing / printing
# ---------------------------------------------------------------------------

class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"\[|\]|[xy][0-9]+")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if not match:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((match.group(), pos))
        pos = match.end()
    return tokens


def parse_word(text: str, m: int) -> Word:
    """Parse the whitespace-separated bracket grammar; inverse of Word.text."""
    tokens = _tokenize(text)
    idx = 0

    def parse_letter():
        nonlocal idx
        if idx >= len(tokens):
            raise WordSyntaxError("unexpected end of input", len(text))
        tok, pos = tokens[idx]
        idx += 1
        if tok == "[":
            parts = [parse_letter(), parse_letter(), parse_letter()]
            if idx >= len(tokens) or tokens[idx][0] != "]":
                raise WordSyntaxError("expected ']'", tokens[idx - 1][1])
            idx += 1
            try:
                return make_triple(*parts)
            except ValueError as exc:
                raise WordSyntaxError(str(exc), pos) from None
        if tok == "]":
            raise WordSyntaxError("unexpected ']'", pos)
        return leaf(_CHAR_SIGN[tok[0]], int(tok[1:]))

    letters = []
    while idx < len(tokens):
        letters.append(parse_letter())
    if not letters:
        raise WordSyntaxError("empty word", 0)
    return word(letters, m)


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def _runs(letters):
    runs = []
    for let in letters:
        if runs and sgn(runs[-1][0]) == sgn(let):
            runs[-1].append(let)
        else:
            runs.append([let])
    return runs


def _relabel_partial(letter, sigma, next_fresh):
    """Relabel through sigma, assigning tentative fresh labels in scan order."""
    assigns = {}

    def go(l):
        if is_leaf(l):
            s, i = l
            j = sigma.get(i)
            if j is None:
                j = assigns.get(i)
                if j is None:
                    j = next_fresh + len(assigns)
                    assigns[i] = j
            return (s, j)
        return (l[0], go(l[1]), go(l[2]), go(l[3]))

    return go(letter), assigns


def _pair_indices(la, lb, pi) -> bool:
    """Extend pi with the index swaps aligning la to lb slot by slot."""
    if is_leaf(la):
        i1, i2 = la[1], lb[1]
        if i1 == i2:
            return True
        if pi.get(i1, i2) != i2 or pi.get(i2, i1) != i1:
            return False
        pi[i1] = i2
        pi[i2] = i1
        return True
    return all(_pair_indices(a, b, pi) for a, b in zip(la[1:], lb[1:]))


def _pi_equivalent(la, lb, pool) -> bool:
    """True when swapping la/lb's fresh indices maps the rest onto itself."""
    pi = {}
    if not _pair_indices(la, lb, pi):
        return False
    before = sorted(letter_key(l) for l in pool)
    after = sorted(letter_key(relabel_letter(l, pi)) for l in pool)
    return before == after


@lru_cache(maxsize=1 << 17)
def canonical_form(w: Word) -> Word:
    """Canonical representative modulo same-sign run shuffles and relabeling.

    Minimizes the word over all rearrangements within maximal equal-sign runs
    combined with compact index relabelings in order of first occurrence.  The
    search branches only on structurally tied letters, with symmetric branches
    pruned, so typical words canonicalize without touching the full orbit.
    """
    if not w.letters:
        return w
    runs = _runs(list(w.letters))
    best: list | None = None
    best_keys: list | None = None

    def dfs(run_i, remaining, sigma, next_fresh, acc_keys, acc_letters):
        nonlocal best, best_keys
        if not remaining:
            if run_i + 1 < len(runs):
                dfs(run_i + 1, list(runs[run_i + 1]), sigma, next_fresh, acc_keys, acc_letters)
            elif best_keys is None or acc_keys < best_keys:
                best_keys = list(acc_keys)
                best = list(acc_letters)
            return
        entries = []
        for t, orig in enumerate(remaining):
            rel, assigns = _relabel_partial(orig, sigma, next_fresh)
            entries.append((letter_key(rel), t, orig, rel, assigns))
        kmin = min(e[0] for e in entries)
        ties = [e for e in entries if e[0] == kmin]
        chosen = []
        if len(ties) > 1:
            pool = list(remaining)
            for run in runs[run_i + 1:]:
                pool.extend(run)
            for e in ties:
                if any(_pi_equivalent(c[2], e[2], pool) for c in chosen):
                    continue
                chosen.append(e)
        else:
            chosen = ties
        for _, t, _, rel, assigns in chosen:
            sigma2 = dict(sigma)
            sigma2.update(assigns)
            acc_keys.append(letter_key(rel))
            acc_letters.append(rel)
            dfs(run_i, remaining[:t] + remaining[t + 1:], sigma2,
                next_fresh + len(assigns), acc_keys, acc_letters)
            acc_keys.pop()
            acc_letters.pop()

    dfs(0, list(runs[0]), {}, 1, [], [])
    return Word(tuple(best), w.m)


# ---------------------------------------------------------------------------
# combinations
# ---------------------------------------------------------------------------

class WordCombination:
    """Finite formal sum of words with exact rational coefficients.

    Keys are canonical forms; zero coefficients are dropped on construction.
    """

    __slots__ = ("m", "terms")

    def __init__(self, terms=None, m: int | None = None, *, _canonical: bool = False):
        merged: dict[Word, Fraction] = {}
        items = []
        if isinstance(terms, Word):
            items = [(terms, Fraction(1))]
        elif isinstance(terms, dict):
            items = list(terms.items())
        elif terms is not None:
            items = list(terms)
        for w, c in items:
            c = Fraction(c)
            if not c:
                continue
            if m is None:
                m = w.m
            elif w.m != m:
                raise ValueError("mixed ambient m in one combination")
            key = w if _canonical else canonical_form(w)
            s = merged.get(key, Fraction(0)) + c
            if s:
                merged[key] = s
            else:
                merged.pop(key, None)
        if m is None:
            raise ValueError("empty combination needs an explicit m")
        self.m = m
        self.terms = merged

    @classmethod
    def zero(cls, m: int) -> "WordCombination":
        return cls([], m)

    def __iter__(self):
        return iter(self.sorted_terms())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (item[0].length, item[0].text))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, w: Word) -> Fraction:
        return self.terms.get(canonical_form(w), Fraction(0))

    def __add__(self, other):
        if isinstance(other, Word):
            other = WordCombination(other)
        items = list(self.terms.items()) + list(other.terms.items())
        return WordCombination(items, self.m, _canonical=True)

    def __sub__(self, other):
        if isinstance(other, Word):
            other = WordCombination(other)
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "WordCombination":
        c = Fraction(c)
        return WordCombination({w: v * c for w, v in self.terms.items()}, self.m, _canonical=True)

    def __eq__(self, other):
        if not isinstance(other, WordCombination):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def to_jsonable(self):
        return [
            {"coefficient": str(c), "word": w.text}
            for w, c in self.sorted_terms()
        ]

    @classmethod
    def from_jsonable(cls, data, m: int) -> "WordCombination":
        return cls([(parse_word(t["word"], m), Fraction(t["coefficient"])) for t in data], m)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            parts.append(f"{c}*({w.text})")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def letters_on(symbols: frozenset):
    """All letters whose symbol set is exactly `symbols`."""
    syms = sorted(symbols, key=lambda s: (s[1], -s[0]))
    if len(syms) == 1:
        return (syms[0],)
    plus = [s for s in syms if s[0] == PLUS]
    minus = [s for s in syms if s[0] == MINUS]
    if abs(len(plus) - len(minus)) != 1:
        return ()
    top = PLUS if len(plus) > len(minus) else MINUS
    out = []
    n = len(syms)
    for a in range(1, n, 2):
        for b in range(1, n - a, 2):
            c = n - a - b
            if c < 1 or c % 2 == 0:
                continue
            # outer parts carry `top`, the middle the opposite sign
            na_plus = (a + 1) // 2 if top == PLUS else a // 2
            nb_plus = b // 2 if top == PLUS else (b + 1) // 2
            for l_plus in itertools.combinations(plus, na_plus):
                for l_minus in itertools.combinations(minus, a - na_plus):
                    left_set = frozenset(l_plus) | frozenset(l_minus)
                    rest_plus = [s for s in plus if s not in left_set]
                    rest_minus = [s for s in minus if s not in left_set]
                    for m_plus in itertools.combinations(rest_plus, nb_plus):
                        for m_minus in itertools.combinations(rest_minus, b - nb_plus):
                            mid_set = frozenset(m_plus) | frozenset(m_minus)
                            right_set = frozenset(syms) - left_set - mid_set
                            for lt in letters_on(left_set):
                                if sgn(lt) != top:
                                    continue
                                for md in letters_on(mid_set):
                                    if sgn(md) == top:
                                        continue
                                    for rt in letters_on(right_set):
                                        if sgn(rt) != top:
                                            continue
                                        out.append((top, lt, md, rt))
    return tuple(out)


def _odd_partitions(symbols):
    """Set partitions of `symbols` into blocks of odd size (as frozensets)."""
    if not symbols:
        yield []
        return
    first = symbols[0]
    rest = symbols[1:]
    for k in range(0, len(rest) + 1, 2):
        for extra in itertools.combinations(rest, k):
            block = frozenset((first,) + extra)
            remaining = [s for s in rest if s not in block]
            for sub in _odd_partitions(remaining):
                yield [block] + sub


def enumerate_words(m: int, max_len: int | None = None, indices: frozenset | None = None,
                    canonical_only: bool = False):
    """All members of the word set for a given m (optionally only over `indices`).

    Beware: grows fast; intended for m <= 3 style exhaustive checks.
    """
    if indices is not None:
        subsets = [tuple(sorted(indices))]
    else:
        subsets = [c for k in range(1, m + 1) for c in itertools.combinations(range(1, m + 1), k)]
    seen = set()
    for js in subsets:
        symbols = [(PLUS, j) for j in js] + [(MINUS, j) for j in js]
        for blocks in _odd_partitions(symbols):
            if max_len is not None and len(blocks) > max_len:
                continue
            choices = [letters_on(b) for b in blocks]
            if any(not ch for ch in choices):
                continue
            for combo in itertools.product(*choices):
                for perm in itertools.permutations(combo):
                    w = Word(tuple(perm), m)
                    if canonical_only:
                        cw = canonical_form(w)
                        if cw in seen:
                            continue
                        seen.add(cw)
                        yield cw
                    else:
                        yield w
