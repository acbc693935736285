from __future__ import annotations

from typing import Iterable, Sequence

__all__ = ["Mapping"]


class Mapping:
    """Injective logical -> physical assignment kept in sync with its inverse.

    ``tau[l]`` is the physical qubit holding logical ``l`` (``-1`` if
    unmapped); ``phys[p]`` is the logical qubit on physical ``p`` (``-1`` if
    free).
    """

    __slots__ = ("tau", "phys")

    def __init__(self, n_logical: int, n_physical: int):
        self.tau = [-1] * n_logical
        self.phys = [-1] * n_physical

    @classmethod
    def from_list(cls, tau: Sequence[int], n_physical: int) -> "Mapping":
        m = cls(len(tau), n_physical)
        for lq, pq in enumerate(tau):
            if pq >= 0:
                m.assign(lq, pq)
        return m

    @classmethod
    def from_dict(cls, assignment: dict[int, int], n_logical: int, n_physical: int) -> "Mapping":
        return cls.from_list([assignment.get(i, -1) for i in range(n_logical)], n_physical)

    def copy(self) -> "Mapping":
        m = Mapping.__new__(Mapping)
        m.tau = list(self.tau)
        m.phys = list(self.phys)
        return m

    def __getitem__(self, lq: int) -> int:
        return self.tau[lq]

    def __len__(self) -> int:
        return len(self.tau)

    def __eq__(self, other) -> bool:
        return isinstance(other, Mapping) and self.tau == other.tau and self.phys == other.phys

    def __repr__(self) -> str:
        pairs = ", ".join(f"q{l}->Q{p}" for l, p in enumerate(self.tau) if p >= 0)
        return f"Mapping({pairs})"

    def assign(self, lq: int, pq: int) -> None:
        if self.tau[lq] >= 0:
            raise ValueError(f"logical q{lq} already mapped to Q{self.tau[lq]}")
        if self.phys[pq] >= 0:
            raise ValueError(f"physical Q{pq} already holds q{self.phys[pq]}")
        self.tau[lq] = pq
        self.phys[pq] = lq

    def swap_physical(self, u: int, v: int) -> None:
        """Exchange the occupants of physical qubits ``u`` and ``v`` (either may be free)."""
        a, b = self.phys[u], self.phys[v]
        self.phys[u], self.phys[v] = b, a
        if a >= 0:
            self.tau[a] = v
        if b >= 0:
            self.tau[b] = u

    def swapped(self, u: int, v: int) -> "Mapping":
        m = self.copy()
        m.swap_physical(u, v)
        return m

    @property
    def mapped_count(self) -> int:
        return sum(1 for p in self.tau if p >= 0)

    def is_total(self, logical: Iterable[int] | None = None) -> bool:
        qs = range(len(self.tau)) if logical is None else logical
        return all(self.tau[q] >= 0 for q in qs)

    def is_consistent(self) -> bool:
        mapped = [p for p in self.tau if p >= 0]
        if len(mapped) != len(set(mapped)):
            return False
        if any(self.phys[p] != l for l, p in enumerate(self.tau) if p >= 0):
            return False
        return all(self.tau[l] == p for p, l in enumerate(self.phys) if l >= 0)
