"""One object per group that computes and keeps the pipeline stages on demand."""

from __future__ import annotations

from functools import cached_property

from . import equiv
from .catalog import build
from .gengraph import reduced_graph
from .lattice import DEFAULT_BUDGET, frattini, maximal_subgroups, subgroup_lattice
from .muniversal import build_action
from .perm import DEFAULT_CAP, OrderExceedsCap, PermGroup, enumerate_elements


class Analysis:
    def __init__(self, group: PermGroup | str, cap: int = DEFAULT_CAP,
                 budget: int = DEFAULT_BUDGET, cache=None):
        self.spec = group if isinstance(group, str) else None
        self.group = build(group) if isinstance(group, str) else group
        self.cap = cap
        self.budget = budget
        self.cache = cache

    @cached_property
    def _stored(self):
        if self.group.order() > self.cap:
            raise OrderExceedsCap(self.group.order(), self.cap)
        return self.cache.load(self.group) if self.cache is not None else None

    @cached_property
    def index(self):
        if self._stored is not None:
            return self._stored.index
        return enumerate_elements(self.group, self.cap)

    @cached_property
    def group_gens(self) -> list[int]:
        return self.index.generator_indices(self.group.generators)

    @cached_property
    def lattice(self):
        if self._stored is not None:
            return self._stored.lattice
        return subgroup_lattice(self.index, self.group_gens, self.budget)

    @cached_property
    def maximal(self):
        if self._stored is not None:
            return self._stored.maximal
        return maximal_subgroups(self.lattice)

    @cached_property
    def action(self):
        if self._stored is not None:
            return self._stored.action
        action = build_action(self.group, self.maximal)
        if self.cache is not None:
            self.cache.store(self.group, self.index, self.lattice, self.maximal, action)
        return action

    @property
    def cache_hit(self) -> bool:
        return self._stored is not None

    @cached_property
    def levels(self):
        return equiv._Levels(self.action)

    @property
    def order(self) -> int:
        return self.index.order

    @cached_property
    def c_partition(self):
        return equiv.c_classes(self.index)

    @property
    def m_partition(self):
        return self.levels.mp

    def mr_partition(self, r: int):
        return equiv.mr_classes(self.action, r, self.levels)

    @cached_property
    def d(self) -> int:
        return equiv.d(self.action, self.levels)

    @cached_property
    def psi_report(self):
        return equiv.psi(self.action, self.levels)

    @property
    def psi(self) -> int:
        return self.psi_report.psi

    @cached_property
    def efficiently_generated(self) -> bool:
        return equiv.efficiently_generated(self.action, self.levels)

    def mu(self, budget: int = equiv.DEFAULT_MU_BUDGET) -> int:
        return equiv.mu(self.action, budget, self.levels)

    @cached_property
    def frattini(self):
        return frattini(self.maximal, self.index)

    @cached_property
    def reduced_graph(self):
        return reduced_graph(self.group, self.action, self.levels)
