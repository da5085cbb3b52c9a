# src/storage/dictionary_file.py
"""JSON persistence for dictionaries.

Sample values and thresholds are stored as ``float.hex`` strings so a
dump/load cycle reproduces every template bit for bit.
"""
import json
import logging
from pathlib import Path
from typing import Dict, List, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.dictionary_builder.models import AxisTemplate, BuildMetadata, Dictionary, QueryTemplate
from src.series_core.errors import DictionaryFormatError
from src.series_core.types import Axis

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class AxisTemplateDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    axis: Axis
    threshold: str
    values: List[str]


class TemplateDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    behavior_class: str
    length_samples: int = Field(..., ge=1)
    source_position: int = Field(..., ge=0)
    anchor: Axis
    training_true_positives: int = Field(0, ge=0)
    axes: List[AxisTemplateDocument] = Field(..., min_length=1)


class DictionaryDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    format_version: Literal[1] = FORMAT_VERSION
    templates: List[TemplateDocument] = Field(default_factory=list)
    build_metadata: BuildMetadata = Field(default_factory=BuildMetadata)
    errors: Dict[str, str] = Field(default_factory=dict)


def _to_document(dictionary: Dictionary) -> DictionaryDocument:
    return DictionaryDocument(
        templates=[
            TemplateDocument(
                behavior_class=t.behavior_class,
                length_samples=t.length_samples,
                source_position=t.source_position,
                anchor=t.anchor,
                training_true_positives=t.training_true_positives,
                axes=[
                    AxisTemplateDocument(
                        axis=axis,
                        threshold=float(at.threshold).hex(),
                        values=[float(v).hex() for v in at.values],
                    )
                    for axis, at in t.axis_templates.items()
                ],
            )
            for t in dictionary.templates
        ],
        build_metadata=dictionary.build_metadata,
        errors=dict(dictionary.errors),
    )


def _from_document(document: DictionaryDocument) -> Dictionary:
    templates = []
    for doc in document.templates:
        axis_templates = {
            a.axis: AxisTemplate(
                values=[float.fromhex(v) for v in a.values], threshold=float.fromhex(a.threshold)
            )
            for a in doc.axes
        }
        templates.append(
            QueryTemplate(
                behavior_class=doc.behavior_class,
                axis_templates=axis_templates,
                length_samples=doc.length_samples,
                source_position=doc.source_position,
                anchor=doc.anchor,
                training_true_positives=doc.training_true_positives,
            )
        )
    return Dictionary(tuple(templates), document.build_metadata, document.errors)


def dump_dictionary(dictionary: Dictionary) -> str:
    payload = _to_document(dictionary).model_dump(mode="json")
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def parse_dictionary(text: str, source: str = "<string>") -> Dictionary:
    try:
        document = DictionaryDocument.model_validate_json(text)
        return _from_document(document)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise DictionaryFormatError(f"{source}: invalid dictionary at '{where}': {first['msg']}") from None
    except ValueError as e:
        raise DictionaryFormatError(f"{source}: invalid dictionary: {e}") from None


def save_dictionary(dictionary: Dictionary, path: Path) -> None:
    path = Path(path)
    path.write_text(dump_dictionary(dictionary), encoding="utf-8")
    logger.info(f"Saved dictionary with classes {dictionary.classes} to {path}")


def load_dictionary(path: Path) -> Dictionary:
    path = Path(path)
    dictionary = parse_dictionary(path.read_text(encoding="utf-8"), source=str(path))
    logger.info(f"Loaded dictionary with classes {dictionary.classes} from {path}")
    return dictionary
