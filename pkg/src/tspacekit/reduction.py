"""Shrinking an increasing index sequence to a generating subset.

Let V_1, V_2, ... be T-spaces with (V_i V_j)^S = V_{i+j} and
V_{2m+1} contained in V_{m+1} + V_1.  Then for r < s every V_{s+t(s-r)}
lies in V_r + V_s, and the sum of V_i over a whole sequence I is already
the sum over a subset J of at most i_2 - i_1 + 1 positions.
``reduce_sequence`` computes such a J; ``closure_covers`` is the
independent brute-force check based on the r, s rule alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


def _validate(seq: Sequence[int]) -> Tuple[int, ...]:
    seq = tuple(int(x) for x in seq)
    if any(x < 1 for x in seq):
        raise ValueError("sequence entries must be positive")
    if any(b <= a for a, b in zip(seq, seq[1:])):
        raise ValueError("sequence must be strictly increasing")
    return seq


def initial_gap(seq: Sequence[int]) -> int:
    seq = _validate(seq)
    if len(seq) < 2:
        raise ValueError("initial gap needs at least two entries")
    return seq[1] - seq[0]


@dataclass(frozen=True)
class Step:
    """One level of the recursion, in the coordinates of that level."""

    depth: int
    sequence: Tuple[int, ...]
    gap: int
    offender: Optional[int] = None  # 1-based position r of the least offender
    t: Optional[int] = None
    prepended: Optional[int] = None  # i_2 + t*gap


@dataclass
class ReductionResult:
    sequence: Tuple[int, ...]
    positions: Tuple[int, ...]
    values: Tuple[int, ...]
    gap: int
    trace: List[Step] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return max((s.depth for s in self.trace), default=0)

    def __len__(self):
        return len(self.positions)


def reduce_sequence(seq: Sequence[int]) -> ReductionResult:
    """Positions J (1-based) with 1, 2 in J and |J| <= i_2 - i_1 + 1.

    Recursion on the initial gap l: if every later entry is i_2 + q*l the
    answer is {1, 2}.  Otherwise, with i_r the least entry off that
    progression and i_2 + t*l < i_r < i_2 + (t+1)*l, recurse on
    (i_2 + t*l, i_r, i_{r+1}, ...) whose gap is below l, and lift its
    positions j >= 2 to r + j - 2.
    """
    seq = _validate(seq)
    if not seq:
        raise ValueError("empty sequence")
    if len(seq) == 1:
        return ReductionResult(seq, (1,), seq, 0, [Step(0, seq, 0)])
    trace: List[Step] = []
    positions = _reduce(seq, 0, trace)
    return ReductionResult(seq, positions, tuple(seq[j - 1] for j in positions), seq[1] - seq[0], trace)


def _reduce(seq: Tuple[int, ...], depth: int, trace: List[Step]) -> Tuple[int, ...]:
    i1, i2 = seq[0], seq[1]
    gap = i2 - i1
    r = next((k for k in range(3, len(seq) + 1) if (seq[k - 1] - i2) % gap), None)
    if r is None:
        trace.append(Step(depth, seq, gap))
        return (1, 2)
    t = (seq[r - 1] - i2) // gap
    head = i2 + t * gap
    trace.append(Step(depth, seq, gap, r, t, head))
    sub = (head,) + seq[r - 1:]
    inner = _reduce(sub, depth + 1, trace)
    return (1, 2) + tuple(r + j - 2 for j in inner if j >= 2)


@dataclass
class Closure:
    """Least fixpoint of the r < s  =>  s + t(s - r) rule, below a bound."""

    members: frozenset
    derivation: Dict[int, Optional[Tuple[int, int, int]]]
    missing: Tuple[int, ...] = ()

    def explain(self, n: int) -> List[str]:
        """Derivation chain for n, leaves first."""
        out: List[str] = []
        seen = set()

        def walk(k):
            if k in seen:
                return
            seen.add(k)
            step = self.derivation[k]
            if step is None:
                out.append(f"{k}: given")
                return
            r, s, t = step
            walk(r)
            walk(s)
            out.append(f"{k} = {s} + {t}*({s} - {r})")

        walk(n)
        return out


def closure_covers(values: Iterable[int], targets: Iterable[int], bound: int) -> Tuple[bool, Closure]:
    values = sorted(set(int(v) for v in values))
    targets = sorted(set(int(v) for v in targets))
    if not values:
        raise ValueError("closure needs at least one value")
    if any(v < 1 for v in values + targets):
        raise ValueError("indices must be positive")
    if targets and bound < targets[-1]:
        raise ValueError(f"bound {bound} is below the largest target {targets[-1]}")
    derivation: Dict[int, Optional[Tuple[int, int, int]]] = {v: None for v in values}
    members = list(values)
    frontier = list(values)
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(members):
                if a == b:
                    continue
                r, s = min(a, b), max(a, b)
                n, t = s + (s - r), 1
                while n <= bound:
                    if n not in derivation:
                        derivation[n] = (r, s, t)
                        members.append(n)
                        fresh.append(n)
                    n += s - r
                    t += 1
        frontier = fresh
    missing = tuple(x for x in targets if x not in derivation)
    return not missing, Closure(frozenset(derivation), derivation, missing)


def _primes():
    n = 2
    while True:
        if all(n % q for q in range(2, int(n ** 0.5) + 1)):
            yield n
        n += 1


def family(name: str, length: int) -> Tuple[int, ...]:
    """Finite prefix of a named sequence: odd, squares, primes, ap:<a>,<d>, all."""
    if length < 1:
        raise ValueError("length must be positive")
    if name == "odd":
        return tuple(2 * k + 1 for k in range(length))
    if name == "squares":
        return tuple((k + 1) ** 2 for k in range(length))
    if name in ("all", "naturals"):
        return tuple(range(1, length + 1))
    if name == "primes":
        gen = _primes()
        return tuple(next(gen) for _ in range(length))
    if name.startswith("ap:"):
        try:
            a, d = (int(x) for x in name[3:].split(","))
        except ValueError:
            raise ValueError(f"bad progression {name!r}; expected ap:<a>,<d>") from None
        if a < 1 or d < 1:
            raise ValueError("progression start and step must be positive")
        return tuple(a + k * d for k in range(length))
    raise ValueError(f"unknown family {name!r}")
