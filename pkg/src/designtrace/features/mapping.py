# src/designtrace/features/mapping.py
"""
Keyword rules that map raw action names onto action categories

The rule table is a declared schema: the first rule (in configured order) whose keyword is a
substring of the lowercased action name wins. The name is matched with one leading space, so a
keyword that starts with a space only matches at the start of a word (" date" matches
"Set Date" but not "Update"). Real exports with a different vocabulary are
adapted by supplying a mapping file:

    { "version": "...", "rules": [ {"keyword": "wall", "code": 3}, ... ] }
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

from ..errors import MappingConfigError, UnmappedActionError
from ..models import ActionCategory, category_of_code
from ..utils import PathLike, read_bytes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MappingRule:
    keyword: str
    category: ActionCategory


@dataclass
class ValidationResult:
    valid: bool
    errors: List[str]
    warnings: List[str]


@dataclass(frozen=True)
class CategoryMapping:
    """Ordered keyword → category rules"""

    rules: Tuple[MappingRule, ...]
    version: str

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        result = validate_rules(self.rules)
        if not result.valid:
            raise MappingConfigError(f"Invalid mapping {self.version}: {'; '.join(result.errors)}")

    def categorize(self, raw_name: str) -> ActionCategory:
        return categorize(raw_name, self)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": self.version,
            "rules": [{"keyword": r.keyword, "code": r.category.code} for r in self.rules],
        }

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "CategoryMapping":
        result = validate_mapping_dict(raw)
        if not result.valid:
            raise MappingConfigError(f"Invalid mapping config: {'; '.join(result.errors)}")
        for warning in result.warnings:
            logger.warning(f"Mapping config: {warning}")
        rules = tuple(
            MappingRule(keyword=r["keyword"], category=category_of_code(r["code"]))
            for r in raw["rules"]
        )
        return cls(rules=rules, version=str(raw["version"]))


def validate_rules(rules: Tuple[MappingRule, ...]) -> ValidationResult:
    errors: List[str] = []
    seen = set()
    for rule in rules:
        if not rule.keyword.strip() or rule.keyword != rule.keyword.lower():
            errors.append(f"Keyword must be non-empty lowercase text: {rule.keyword!r}")
        if rule.keyword in seen:
            errors.append(f"Duplicate keyword: {rule.keyword!r}")
        seen.add(rule.keyword)

    covered = {rule.category for rule in rules}
    missing = [c.label for c in ActionCategory if c not in covered]
    if missing:
        errors.append(f"Categories without a rule: {', '.join(missing)}")

    return ValidationResult(valid=not errors, errors=errors, warnings=[])


def validate_mapping_dict(raw: Any) -> ValidationResult:
    """Shape checks on a decoded mapping file before rules are built"""
    errors: List[str] = []
    warnings: List[str] = []

    if not isinstance(raw, dict):
        return ValidationResult(False, [f"Mapping must be an object, got {type(raw).__name__}"], [])

    if "version" not in raw:
        errors.append("Missing required field: version")
    rules = raw.get("rules")
    if not isinstance(rules, list) or not rules:
        errors.append("rules must be a non-empty array")
        return ValidationResult(False, errors, warnings)

    for i, rule in enumerate(rules):
        if not isinstance(rule, dict):
            errors.append(f"rules[{i}] must be an object")
            continue
        keyword = rule.get("keyword")
        code = rule.get("code")
        if not isinstance(keyword, str):
            errors.append(f"rules[{i}].keyword must be text")
        if isinstance(code, bool) or not isinstance(code, int) or not 0 <= code <= 12:
            errors.append(f"rules[{i}].code must be an integer in 0..12")
        extra = set(rule) - {"keyword", "code"}
        if extra:
            warnings.append(f"rules[{i}] has unknown fields: {', '.join(sorted(extra))}")

    return ValidationResult(valid=not errors, errors=errors, warnings=warnings)


def categorize(raw_name: str, mapping: CategoryMapping) -> ActionCategory:
    """Category of the first rule whose keyword occurs in the lowercased name"""
    lowered = " " + raw_name.lower()
    for rule in mapping.rules:
        if rule.keyword in lowered:
            return rule.category
    raise UnmappedActionError(raw_name)


def load_mapping(path: PathLike) -> CategoryMapping:
    try:
        raw = json.loads(read_bytes(path).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise MappingConfigError(f"Mapping file {path} is not valid JSON: {e}") from e
    mapping = CategoryMapping.from_dict(raw)
    logger.info(f"Loaded category mapping {mapping.version} ({len(mapping.rules)} rules)")
    return mapping


_DEFAULT_KEYWORDS: Tuple[Tuple[str, ActionCategory], ...] = (
    ("door", ActionCategory.DOOR),
    ("floor", ActionCategory.FLOOR),
    ("foundation", ActionCategory.FOUNDATION),
    ("wall", ActionCategory.WALL),
    ("window", ActionCategory.WINDOW),
    ("roof", ActionCategory.ROOF),
    ("solar", ActionCategory.SOLAR_PANEL),
    ("tree", ActionCategory.TREE),
    ("building", ActionCategory.BUILDING),
    ("analy", ActionCategory.ANALYSIS),
    ("heliodon", ActionCategory.ANALYSIS),
    ("graph", ActionCategory.ANALYSIS),
    ("latitude", ActionCategory.PARAMETERS),
    ("location", ActionCategory.PARAMETERS),
    (" date", ActionCategory.PARAMETERS),
    (" time", ActionCategory.PARAMETERS),
    ("u-value", ActionCategory.THERMAL),
    ("thermal", ActionCategory.THERMAL),
    ("color", ActionCategory.COLOR),
)

DEFAULT_MAPPING = CategoryMapping(
    rules=tuple(MappingRule(keyword=k, category=c) for k, c in _DEFAULT_KEYWORDS),
    version="default-1",
)
