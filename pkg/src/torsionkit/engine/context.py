"""Fact store for one proof branch: explicit facts plus tightened intervals."""
from __future__ import annotations

from typing import Iterable

from .facts import FALSE, Fact, Interval, components, default_interval, hat, object_base


class Context:
    def __init__(self):
        self.facts: set[Fact] = set()
        self.intervals: dict[tuple, Interval] = {}
        self.objects: set[str] = set()
        self.closed = False

    def copy(self) -> "Context":
        c = Context()
        c.facts = set(self.facts)
        c.intervals = dict(self.intervals)
        c.objects = set(self.objects)
        c.closed = self.closed
        return c

    # -- queries -----------------------------------------------------------

    def interval(self, key: tuple) -> Interval:
        return self.intervals.get(key, default_interval(key))

    def is_zero(self, x: str) -> bool:
        return Fact("Zero", (x,)) in self.facts

    def entails(self, f: Fact) -> bool:
        if self.closed:
            return True
        k = f.kind
        if f.is_interval:
            return self.interval(f.key).within(f.interval)
        if k == "False":
            return False
        if f in self.facts:
            return True
        if k == "Mem":
            x, cat = f.args
            if cat == "AX" or self.is_zero(x):
                return True
            parts = components(cat)
            if len(parts) > 1:
                return all(self.entails(Fact("Mem", (x, p))) for p in parts)
            return any(g.kind == "Mem" and g.args[0] == x and cat in components(g.args[1])
                       for g in self.facts)
        if k == "Sub":
            a, b = f.args
            if b == "AX" or set(components(b)) <= set(components(a)):
                return True
            if len(components(b)) > 1:
                return all(self.entails(Fact("Sub", (a, p))) for p in components(b))
            return False
        if k == "Eq":
            a, b = f.args
            return a == b or Fact("Eq", (b, a)) in self.facts
        if k == "Quot":
            return f.args[0] == f.args[1]
        if k == "Zero":
            return False
        return False

    # -- updates -----------------------------------------------------------

    def note_objects(self, f: Fact) -> None:
        for x in f.objects():
            self.objects.add(object_base(x))

    def add(self, f: Fact) -> None:
        if f == FALSE:
            self.closed = True
            return
        self.note_objects(f)
        if f.is_interval:
            # an empty interval is a contradiction, but only ABSURD closes the branch
            self.intervals[f.key] = self.interval(f.key) & f.interval
            return
        self.facts.add(f)
        if f.kind == "Zero":
            x = f.args[0]
            for y in (x, hat(x)):
                self.facts.add(Fact("Zero", (y,)))
                for kind in ("Dim", "Dpi"):
                    self.add(Fact(kind, (y, Interval(-1, -1))))

    def add_all(self, fs: Iterable[Fact]) -> None:
        for f in fs:
            self.add(f)

    def knows_object(self, x: str) -> bool:
        return object_base(x) in self.objects
