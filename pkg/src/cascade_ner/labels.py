"""Entity inventory and tag schemes.

Thirteen entity types arise from five software groups crossed with four
mention roles; only the combinations below exist in the annotation scheme.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .exceptions import InvalidEntityType, UnknownLabel


class EntityGroup(enum.Enum):
    Application = "Application"
    OperatingSystem = "OperatingSystem"
    PlugIn = "PlugIn"
    ProgrammingEnvironment = "ProgrammingEnvironment"
    SoftwareCoreference = "SoftwareCoreference"


class EntityRole(enum.Enum):
    Creation = "Creation"
    Deposition = "Deposition"
    Mention = "Mention"
    Usage = "Usage"


_VALID_ROLES = {
    EntityGroup.Application: ("Creation", "Deposition", "Mention", "Usage"),
    EntityGroup.OperatingSystem: ("Mention", "Usage"),
    EntityGroup.PlugIn: ("Creation", "Deposition", "Mention", "Usage"),
    EntityGroup.ProgrammingEnvironment: ("Mention", "Usage"),
    EntityGroup.SoftwareCoreference: ("Deposition",),
}


@dataclass(frozen=True)
class EntityType:
    group: EntityGroup
    role: EntityRole

    def __post_init__(self):
        if not isinstance(self.group, EntityGroup) or not isinstance(self.role, EntityRole):
            raise InvalidEntityType(f"expected EntityGroup/EntityRole, got {self.group!r}/{self.role!r}")
        if self.role.value not in _VALID_ROLES[self.group]:
            raise InvalidEntityType(f"{self.group.value}_{self.role.value} is not a valid entity type")

    @classmethod
    def parse(cls, name: str) -> "EntityType":
        group, sep, role = name.rpartition("_")
        if not sep:
            raise InvalidEntityType(f"malformed entity type {name!r}")
        try:
            return cls(EntityGroup(group), EntityRole(role))
        except ValueError:
            raise InvalidEntityType(f"unknown entity type {name!r}") from None

    @property
    def index(self) -> int:
        return _TYPE_INDEX[self]

    def __str__(self):
        return f"{self.group.value}_{self.role.value}"

    def __lt__(self, other):
        return self.index < other.index


ENTITY_TYPES: tuple[EntityType, ...] = tuple(
    EntityType(group, EntityRole(role)) for group, roles in _VALID_ROLES.items() for role in roles
)
_TYPE_INDEX = {t: i for i, t in enumerate(ENTITY_TYPES)}
_TYPE_BY_NAME = {str(t): t for t in ENTITY_TYPES}


def entity_type(name: str | EntityType) -> EntityType:
    """Look up an entity type by canonical name (``"Application_Usage"``)."""
    if isinstance(name, EntityType):
        return name
    try:
        return _TYPE_BY_NAME[name]
    except (KeyError, TypeError):
        return EntityType.parse(name)


class TagScheme(enum.Enum):
    FULL27 = "full27"
    UNTYPED3 = "untyped3"

    @property
    def labels(self) -> tuple[str, ...]:
        return FULL27_LABELS if self is TagScheme.FULL27 else UNTYPED3_LABELS

    @classmethod
    def parse(cls, value: "str | TagScheme") -> "TagScheme":
        if isinstance(value, TagScheme):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise UnknownLabel(f"unknown tag scheme {value!r}") from None


# B-/I- pairs in entity-type order, then O (the 27-row label table ordering).
FULL27_LABELS: tuple[str, ...] = tuple(
    f"{prefix}-{t}" for t in ENTITY_TYPES for prefix in ("B", "I")
) + ("O",)
UNTYPED3_LABELS: tuple[str, ...] = ("O", "B", "I")

_FULL27_SET = frozenset(FULL27_LABELS)
_UNTYPED3_SET = frozenset(UNTYPED3_LABELS)



_PARSED = {
    "full27": {"O": ("O", None), **{
        f"{prefix}-{t}": (prefix, t) for t in ENTITY_TYPES for prefix in ("B", "I")
    }},
    "untyped3": {"O": ("O", None), "B": ("B", None), "I": ("I", None)},
}


def parse_label(label: str, scheme: TagScheme) -> tuple[str, EntityType | None]:
    """Split a label into its prefix (``O``/``B``/``I``) and optional type."""
    try:
        return _PARSED[scheme.value][label]
    except (KeyError, TypeError):
        pass
    if scheme is TagScheme.FULL27:
        raise UnknownLabel(f"label {label!r} is not in the 27-label inventory")
    raise UnknownLabel(f"label {label!r} is not one of O/B/I")


def infer_scheme(labels) -> TagScheme | None:
    """Guess the scheme of a label collection; None when it is all ``O``."""
    scheme = None
    for label in labels:
        if label == "O":
            continue
        if label in _UNTYPED3_SET:
            found = TagScheme.UNTYPED3
        elif label in _FULL27_SET:
            found = TagScheme.FULL27
        else:
            raise UnknownLabel(f"unknown label {label!r}")
        if scheme is not None and found is not scheme:
            raise UnknownLabel("typed and untyped labels mixed in one tag set")
        scheme = found
    return scheme
