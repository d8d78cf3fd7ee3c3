"""The relation engine for words.

Three relations drive everything:

  R1  letters of equal sign commute;
  R2  swapping an adjacent unequal-sign pair adds, for every later letter,
      a correction word in which the pair is merged into that letter as a
      bracket triple (sign depending on the letter's sign), shortening the
      word by two;
  R3  the pair indices may be relabeled by any permutation.

`factorize` rewrites a combination until every word has contiguous graph
components.  `reduce_mod_rprime` does the same but discards words whose graph
contains a cycle and words that split as a product of two smaller members;
what survives of the Laplacian word y1..ym x1..xm is exactly the tree-word
sum whose coefficient the closed formula predicts.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .graphs import components, has_cycle, is_factorized, is_tree
from .words import (
    MINUS,
    PLUS,
    Word,
    WordCombination,
    canonical_form,
    j_set,
    laplacian_word,
    letter_symbols,
    make_triple,
    relabel_letter,
    sgn,
)


class BudgetExceeded(RuntimeError):
    """Raised when a rewrite run passes its wall-clock deadline."""


@dataclass
class TraceStep:
    rule: str
    position: int
    before: WordCombination
    after: WordCombination

    def to_jsonable(self):
        return {
            "rule": self.rule,
            "position": self.position,
            "before": self.before.to_jsonable(),
            "after": self.after.to_jsonable(),
        }


@dataclass
class RewriteTrace:
    steps: list = field(default_factory=list)

    def to_jsonable(self):
        return {"steps": [s.to_jsonable() for s in self.steps]}

    def replay(self) -> WordCombination:
        """Check the before/after chain and return the final combination."""
        if not self.steps:
            raise ValueError("empty trace")
        for prev, nxt in zip(self.steps, self.steps[1:]):
            if prev.after != nxt.before:
                raise ValueError("trace steps do not chain")
        return self.steps[-1].after


# ---------------------------------------------------------------------------
# single rules
# ---------------------------------------------------------------------------

def apply_r1(w: Word, i: int) -> Word:
    """Swap the equal-sign letters at positions i, i+1 (1-based)."""
    if not 1 <= i < len(w.letters):
        raise ValueError(f"position {i} out of range for a word of length {len(w.letters)}")
    a, b = w.letters[i - 1], w.letters[i]
    if sgn(a) != sgn(b):
        raise ValueError(f"letters at positions {i}, {i + 1} have different signs")
    letters = list(w.letters)
    letters[i - 1], letters[i] = b, a
    return Word(tuple(letters), w.m)


def _merged_letter(lam, mu, tail_letter):
    """Correction letter for R2 and its sign: +[lam mu t] or -[mu lam t]."""
    if sgn(tail_letter) == sgn(lam):
        return make_triple(lam, mu, tail_letter), 1
    return make_triple(mu, lam, tail_letter), -1


def apply_r2(w: Word, i: int) -> WordCombination:
    """Swap the unequal-sign pair at positions i, i+1 plus merge corrections.

    The swapped word keeps coefficient 1; every letter after the pair yields
    one correction word (two letters shorter) in which the pair has been
    merged into it.  A trailing pair swaps with no corrections.
    """
    if not 1 <= i < len(w.letters):
        raise ValueError(f"position {i} out of range for a word of length {len(w.letters)}")
    lam, mu = w.letters[i - 1], w.letters[i]
    if sgn(lam) == sgn(mu):
        raise ValueError(f"letters at positions {i}, {i + 1} have equal signs")
    terms = []
    swapped = list(w.letters)
    swapped[i - 1], swapped[i] = mu, lam
    terms.append((Word(tuple(swapped), w.m), Fraction(1)))
    prefix = w.letters[: i - 1]
    tail = w.letters[i + 1:]
    for t, tail_letter in enumerate(tail):
        merged, sign = _merged_letter(lam, mu, tail_letter)
        letters = prefix + tail[:t] + (merged,) + tail[t + 1:]
        terms.append((Word(letters, w.m), Fraction(sign)))
    return WordCombination(terms, w.m)


def relabel_r3(w: Word, tau) -> Word:
    """Relabel pair indices by the permutation tau of {1..m}."""
    if isinstance(tau, dict):
        mapping = {int(k): int(v) for k, v in tau.items()}
    else:
        mapping = {j + 1: int(v) for j, v in enumerate(tau)}
    if sorted(mapping) != list(range(1, w.m + 1)) or sorted(mapping.values()) != list(range(1, w.m + 1)):
        raise ValueError("tau is not a permutation of 1..m")
    letters = tuple(relabel_letter(let, mapping) for let in w.letters)
    return Word(letters, w.m)


# ---------------------------------------------------------------------------
# reduction engine
# ---------------------------------------------------------------------------

def _is_product(w: Word) -> bool:
    """True when some proper letter prefix is pair-closed (a product split)."""
    open_pairs = 0
    seen = set()
    for pos, letter in enumerate(w.letters):
        for s, idx in letter_symbols(letter):
            if idx in seen:
                open_pairs -= 1
            else:
                seen.add(idx)
                open_pairs += 1
        if open_pairs == 0 and pos + 1 < len(w.letters):
            return True
    return False


class _Engine:
    def __init__(self, m: int, prune: bool, deadline, trace: RewriteTrace | None):
        self.m = m
        self.prune = prune
        self.deadline = deadline
        self.trace = trace
        self.queue: deque[Word] = deque()
        self.pending: dict[Word, Fraction] = {}
        self.out: dict[Word, Fraction] = {}
        # only maintained while tracing: the full current combination
        self.state: dict[Word, Fraction] = {}

    # -- state helpers ---------------------------------------------------
    def _tick(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("rewrite budget exhausted")

    def _snapshot(self, extra=()):
        terms = dict(self.out)
        for w, c in self.pending.items():
            terms[w] = terms.get(w, Fraction(0)) + c
        for w, c in extra:
            cw = canonical_form(w)
            terms[cw] = terms.get(cw, Fraction(0)) + c
        return WordCombination(terms, self.m, _canonical=True)

    def _record(self, rule: str, position: int, before, after):
        self.trace.steps.append(TraceStep(rule, position, before, after))

    def push(self, w: Word, c: Fraction):
        cw = canonical_form(w)
        if cw in self.pending:
            self.pending[cw] += c
        else:
            self.pending[cw] = c
            self.queue.append(cw)

    def emit(self, w: Word, c: Fraction):
        cw = canonical_form(w)
        s = self.out.get(cw, Fraction(0)) + c
        if s:
            self.out[cw] = s
        else:
            self.out.pop(cw, None)

    # -- word processing ---------------------------------------------------
    def bubble(self, w: Word, coeff: Fraction):
        """Sort one word into component-contiguous order, queueing corrections.

        Components are ordered by first letter position; adjacent swaps walk
        the word to that target.  Every unequal-sign swap queues the R2
        corrections (two letters shorter), so induction on length terminates.
        """
        comp_blocks = components(w)
        comp_rank = {}
        for rank_i, block in enumerate(comp_blocks):
            for pos in block:
                comp_rank[pos] = rank_i
        letters = list(w.letters)
        ranks = [(comp_rank[pos], pos) for pos in range(1, len(letters) + 1)]
        changed = True
        while changed:
            self._tick()
            changed = False
            for i in range(len(letters) - 1):
                if ranks[i] <= ranks[i + 1]:
                    continue
                lam, mu = letters[i], letters[i + 1]
                if self.trace is not None:
                    before = self._snapshot([(Word(tuple(letters), self.m), coeff)])
                if sgn(lam) == sgn(mu):
                    rule = "R1"
                else:
                    rule = "R2"
                    tail = letters[i + 2:]
                    for t, tail_letter in enumerate(tail):
                        merged, sign = _merged_letter(lam, mu, tail_letter)
                        cw = Word(tuple(letters[:i] + tail[:t] + [merged] + tail[t + 1:]), self.m)
                        if self.prune and (has_cycle(cw) or _is_product(cw)):
                            continue
                        self.push(cw, coeff * sign)
                letters[i], letters[i + 1] = mu, lam
                ranks[i], ranks[i + 1] = ranks[i + 1], ranks[i]
                if self.trace is not None:
                    after = self._snapshot([(Word(tuple(letters), self.m), coeff)])
                    self._record(rule, i + 1, before, after)
                changed = True
                break
        final = Word(tuple(letters), self.m)
        if self.prune and len(comp_blocks) > 1:
            if self.trace is not None:
                before = self._snapshot([(final, coeff)])
                self._record("drop-product", 0, before, self._snapshot())
            return
        self.emit(final, coeff)

    def run(self, comb: WordCombination) -> WordCombination:
        for w, c in comb.terms.items():
            self.push(w, c)
        while self.queue:
            self._tick()
            w = self.queue.popleft()
            c = self.pending.pop(w)
            if not c:
                continue
            if self.prune:
                if has_cycle(w):
                    if self.trace is not None:
                        before = self._snapshot([(w, c)])
                        self._record("drop-cycle", 0, before, self._snapshot())
                    continue
                if _is_product(w):
                    if self.trace is not None:
                        before = self._snapshot([(w, c)])
                        self._record("drop-product", 0, before, self._snapshot())
                    continue
            if is_factorized(w):
                self.emit(w, c)
                continue
            self.bubble(w, c)
        return WordCombination(self.out, self.m, _canonical=True)


def factorize(c, *, budget_seconds: float | None = None, trace: RewriteTrace | None = None) -> WordCombination:
    """Rewrite into an equivalent combination of factorized words."""
    if isinstance(c, Word):
        c = WordCombination(c)
    deadline = time.monotonic() + budget_seconds if budget_seconds is not None else None
    return _Engine(c.m, False, deadline, trace).run(c)


def reduce_mod_rprime(c, *, budget_seconds: float | None = None, trace: RewriteTrace | None = None) -> WordCombination:
    """Like factorize, but drops cycle words and product words throughout."""
    if isinstance(c, Word):
        c = WordCombination(c)
    deadline = time.monotonic() + budget_seconds if budget_seconds is not None else None
    return _Engine(c.m, True, deadline, trace).run(c)


# ---------------------------------------------------------------------------
# the tree-word coefficient
# ---------------------------------------------------------------------------

def tree_coefficient(m: int, *, budget_seconds: float | None = None) -> Fraction:
    """Total coefficient of tree words with m edges in the reduced Laplacian word."""
    if m < 1:
        raise ValueError("m must be >= 1")
    reduced = reduce_mod_rprime(WordCombination(laplacian_word(m)), budget_seconds=budget_seconds)
    total = Fraction(0)
    for w, c in reduced.terms.items():
        if len(j_set(w)) == m and is_tree(w):
            total += c
    return total


def tree_coefficient_formula(m: int) -> Fraction:
    """Closed form: (2k)!/(-2)^k * C(2k, k) for m = 2k+1, and 0 for even m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m % 2 == 0:
        return Fraction(0)
    k = (m - 1) // 2
    return Fraction(factorial(2 * k), (-2) ** k) * comb(2 * k, k)
