"""Object universe: roles, object-name multisets, and role-based filtering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import UnderflowError, UnknownObject, UnknownRole

PERSISTENT = "persistent"
EXPECTED = "expected"
SPONTANEOUS = "spontaneous"
ROLE_KINDS = (PERSISTENT, EXPECTED, SPONTANEOUS)


@dataclass(frozen=True)
class Role:
    name: str
    kind: str = SPONTANEOUS

    def __post_init__(self) -> None:
        if self.kind not in ROLE_KINDS:
            raise ValueError(f"unknown role kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class ObjectMultiset:
    """Immutable multiset of object names; counts are always >= 1."""

    entries: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for name, count in self.entries:
            if count < 1:
                raise ValueError(f"count for {name!r} must be >= 1")
            if name in seen:
                raise ValueError(f"duplicate entry for {name!r}")
            seen.add(name)
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))
        object.__setattr__(self, "_hash", hash(self.entries))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ObjectMultiset) and self.entries == other.entries

    @classmethod
    def of(cls, *names: str) -> "ObjectMultiset":
        counts: dict[str, int] = {}
        for n in names:
            counts[n] = counts.get(n, 0) + 1
        return cls(tuple(counts.items()))

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "ObjectMultiset":
        return cls(tuple((n, c) for n, c in counts.items() if c > 0))

    def counts(self) -> dict[str, int]:
        return dict(self.entries)

    def count(self, name: str) -> int:
        return dict(self.entries).get(name, 0)

    def support(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.entries)

    def total(self) -> int:
        return sum(c for _, c in self.entries)

    def is_empty(self) -> bool:
        return not self.entries

    def __iter__(self) -> Iterator[str]:
        for name, count in self.entries:
            for _ in range(count):
                yield name

    def __len__(self) -> int:
        return self.total()

    def add(self, other: "ObjectMultiset") -> "ObjectMultiset":
        counts = self.counts()
        for n, c in other.entries:
            counts[n] = counts.get(n, 0) + c
        return ObjectMultiset.from_counts(counts)

    def subtract(self, other: "ObjectMultiset") -> "ObjectMultiset":
        """Guarded difference: requires other <= self."""
        counts = self.counts()
        for n, c in other.entries:
            if counts.get(n, 0) < c:
                raise UnderflowError(f"cannot remove {c} x {n!r}")
            counts[n] -= c
        return ObjectMultiset.from_counts(counts)

    def leq(self, other: "ObjectMultiset") -> bool:
        theirs = other.counts()
        return all(theirs.get(n, 0) >= c for n, c in self.entries)

    def min(self, other: "ObjectMultiset") -> "ObjectMultiset":
        theirs = other.counts()
        return ObjectMultiset.from_counts(
            {n: min(c, theirs.get(n, 0)) for n, c in self.entries}
        )

    def restrict(self, names: Iterable[str]) -> "ObjectMultiset":
        keep = frozenset(names)
        return ObjectMultiset(tuple((n, c) for n, c in self.entries if n in keep))

    def __str__(self) -> str:
        return "[" + ",".join(f"{c}*{n}" if c > 1 else n for n, c in self.entries) + "]"


@dataclass(frozen=True)
class ObjectUniverse:
    """Declared roles and objects; every object belongs to exactly one role."""

    roles: tuple[Role, ...]
    objects: ObjectMultiset
    role_by_object: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        role_names = [r.name for r in self.roles]
        if len(set(role_names)) != len(role_names):
            raise ValueError("duplicate role names")
        mapping = dict(self.role_by_object)
        for name in self.objects.support():
            if name not in mapping:
                raise ValueError(f"object {name!r} has no role")
        for name, role in mapping.items():
            if role not in role_names:
                raise UnknownRole(f"object {name!r} maps to undeclared role {role!r}")
        object.__setattr__(self, "role_by_object", tuple(sorted(self.role_by_object)))

    @classmethod
    def build(cls, roles: Iterable[Role], objects: Mapping[str, tuple[str, int]]) -> "ObjectUniverse":
        """``objects`` maps object name -> (role name, multiplicity)."""
        counts = {name: mult for name, (_, mult) in objects.items()}
        role_of = tuple((name, role) for name, (role, _) in objects.items())
        return cls(tuple(roles), ObjectMultiset.from_counts(counts), role_of)

    def role_map(self) -> dict[str, str]:
        return dict(self.role_by_object)

    def role_names(self) -> frozenset[str]:
        return frozenset(r.name for r in self.roles)

    def role_kind(self, role: str) -> str:
        for r in self.roles:
            if r.name == role:
                return r.kind
        raise UnknownRole(role)

    def role_of(self, name: str) -> str:
        mapping = dict(self.role_by_object)
        if name not in mapping:
            raise UnknownObject(f"object {name!r} not declared")
        return mapping[name]

    def has_object(self, name: str) -> bool:
        return name in dict(self.role_by_object)

    def objects_of_roles(self, roles: Iterable[str]) -> ObjectMultiset:
        wanted = frozenset(roles)
        unknown = wanted - self.role_names()
        if unknown:
            raise UnknownRole(f"undeclared roles: {sorted(unknown)}")
        mapping = dict(self.role_by_object)
        return ObjectMultiset(
            tuple((n, c) for n, c in self.objects.entries if mapping[n] in wanted)
        )

    def roles_of(self, objs: ObjectMultiset) -> frozenset[str]:
        return frozenset(self.role_of(n) for n in objs.support())

    def persistent_objects(self) -> frozenset[str]:
        mapping = dict(self.role_by_object)
        persistent = {r.name for r in self.roles if r.kind == PERSISTENT}
        return frozenset(n for n, r in mapping.items() if r in persistent)

    def with_objects(self, extra: Mapping[str, str]) -> "ObjectUniverse":
        """Universe extended with additional (name -> role) objects, count 1."""
        counts = self.objects.counts()
        role_of = dict(self.role_by_object)
        for name, role in extra.items():
            if name not in role_of:
                counts[name] = 1
                role_of[name] = role
        return ObjectUniverse(
            self.roles, ObjectMultiset.from_counts(counts), tuple(role_of.items())
        )
