"""Random valid Hecke-Farey symbols, grown from the base q-gon.

Growth step: pick a boundary side u -> v and glue the q-gon on its far side,
either whole or as the sector cut off by an e_r chord.  Labels are then
assigned at random with free labels used in pairs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .ring import get_ring
from .symbol import Cusp, HeckeFareySymbol, PairingLabel, normalize_side, qgon_complete

__all__ = ["GeneratorConfig", "random_symbol", "base_qgon_symbol", "two_bullet_symbol"]


@dataclass(frozen=True)
class GeneratorConfig:
    max_expansions: int = 3
    er_probability: float = 0.3
    circle_weight: float = 0.3
    bullet_weight: float = 0.2


def _base_cusps(q):
    R = get_ring(q)
    P = qgon_complete(Cusp(R(-1), R.zero), Cusp(R.zero, R.one), q)
    return list(P.cusps)


def base_qgon_symbol(q: int) -> HeckeFareySymbol:
    """All-circles symbol on the q-gon with vertices -inf, 0, ..., inf."""
    cusps = _base_cusps(q)
    return HeckeFareySymbol(q, tuple(cusps), tuple(PairingLabel("circle") for _ in range(q)))


def two_bullet_symbol(q: int) -> HeckeFareySymbol:
    R = get_ring(q)
    cusps = (Cusp(R(-1), R.zero), Cusp(R.zero, R.one), Cusp(R.one, R.zero))
    return HeckeFareySymbol(q, cusps, (PairingLabel("bullet"), PairingLabel("bullet")))


def _positive(c: Cusp) -> Cusp:
    # keep finite cusps with positive denominator so the text form reads naturally
    if c.den and c.den.sign() < 0:
        return -c
    return c


def random_symbol(q: int, rng: random.Random, cfg: Optional[GeneratorConfig] = None) -> HeckeFareySymbol:
    cfg = cfg or GeneratorConfig()
    # each boundary entry: (cusp, kind of the side starting there); kind "e<r>" or "plain"
    cusps = _base_cusps(q)
    kinds = ["plain"] * q
    divisors = [r for r in range(2, q) if q % r == 0]
    for _ in range(rng.randint(0, cfg.max_expansions)):
        plain = [i for i, k in enumerate(kinds) if k == "plain"]
        if not plain:
            break
        i = rng.choice(plain)
        u, v = cusps[i], cusps[i + 1]
        a, b = normalize_side(v, u)
        Q = list(qgon_complete(a, b, q).cusps[:q])  # v, u, w3, ..., wq
        Q[1] = u  # keep the caller's representative (matters for -inf)
        ring = []
        if divisors and rng.random() < cfg.er_probability:
            r = rng.choice(divisors)
            k = q // r
            j = rng.randint(-(k - 1), 0)
            start, end = j % q, (j + k) % q  # arc Q[start] .. Q[end] through side (v, u)
            # boundary path u, w3, ..., b=Q[end], a=Q[start], ..., v
            idx = list(range(1, q)) + [0]  # positions u .. wq, v
            # 1 <= end <= k and start is 0 or > q - k, so the chord fits
            pos_end, pos_start = idx.index(end), idx.index(start)
            for p in idx[: pos_end + 1]:
                ring.append((Q[p], "plain"))
            ring[-1] = (Q[end], f"e{r}")
            for p in idx[pos_start:-1]:
                ring.append((Q[p], "plain"))
        else:
            ring = [(Q[p], "plain") for p in range(1, q)]
        new_cusps = [_positive(c) for c, _ in ring]
        new_kinds = [k for _, k in ring]
        cusps = cusps[:i] + new_cusps + cusps[i + 1:]
        kinds = kinds[:i] + new_kinds + kinds[i + 1:]
    labels = _random_labels(kinds, rng, cfg)
    return HeckeFareySymbol(q, tuple(cusps), tuple(labels))


def _random_labels(kinds, rng, cfg):
    labels = [None] * len(kinds)
    free = []
    for i, k in enumerate(kinds):
        if k != "plain":
            labels[i] = PairingLabel("er", int(k[1:]))
            continue
        x = rng.random()
        if x < cfg.circle_weight:
            labels[i] = PairingLabel("circle")
        elif x < cfg.circle_weight + cfg.bullet_weight:
            labels[i] = PairingLabel("bullet")
        else:
            free.append(i)
    rng.shuffle(free)
    if len(free) % 2:
        labels[free.pop()] = PairingLabel("circle")
    for n, p in enumerate(range(0, len(free), 2), start=1):
        labels[free[p]] = labels[free[p + 1]] = PairingLabel("free", n)
    return labels
