"""Principals and the four-role authorization model.

Confidential registration content is visible to registry administrators,
government readers, and the submitting developer; everyone else sees only
the public projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Role(str, Enum):
    DEVELOPER = "Developer"
    REGISTRY_ADMIN = "RegistryAdmin"
    GOVERNMENT_READER = "GovernmentReader"
    PUBLIC = "Public"


class Unauthorized(Exception):
    pass


@dataclass(frozen=True)
class Principal:
    role: Role
    # Business registration number of the developer entity, for DEVELOPER.
    entity_ref: str | None = None

    def to_dict(self) -> dict:
        return {"role": self.role.value, "entity_ref": self.entity_ref}

    @classmethod
    def from_dict(cls, data: dict) -> "Principal":
        return cls(role=Role(data["role"]), entity_ref=data.get("entity_ref"))


PUBLIC = Principal(Role.PUBLIC)
REGISTRY_ADMIN = Principal(Role.REGISTRY_ADMIN)
GOVERNMENT_READER = Principal(Role.GOVERNMENT_READER)


def developer_principal(entity_ref: str) -> Principal:
    if not entity_ref:
        raise ValueError("developer principal needs a business registration number")
    return Principal(Role.DEVELOPER, entity_ref=entity_ref)
