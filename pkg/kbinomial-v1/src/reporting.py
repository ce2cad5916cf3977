"""
Result records and their JSON, CSV and human renderings
"""

import io
import json
import logging
from dataclasses import fields, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import jsonschema
import numpy as np
import pandas as pd

from utils import OutputSchemaError
from words import BinomialSignature, ParikhVector, RleWord, Word
from nil2 import NilNormalForm, PhiVector, SignedWord

logger = logging.getLogger(__name__)

SCHEMA_PATH = Path(__file__).resolve().parent.parent / 'schema' / 'output.schema.json'
FORMATS = ('human', 'json', 'csv')


def _word_sort_key(item: Any) -> Tuple:
    if isinstance(item, (Word, SignedWord)):
        return (len(item), str(item))
    return (0, str(item))


class ResultFormatter:
    """Turns toolkit objects into plain records and renders them"""

    def __init__(self, schema_path: Path = SCHEMA_PATH):
        self.schema_path = Path(schema_path)
        self._schema = None

    def to_jsonable(self, value: Any) -> Any:
        """Plain JSON types; words become their printed form, sets become sorted lists"""
        if value is None or isinstance(value, (bool, str)):
            return value
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, (float, np.floating)):
            return float(value)
        if isinstance(value, Fraction):
            return str(value)
        if isinstance(value, (Word, SignedWord)):
            return str(value)
        if isinstance(value, RleWord):
            return {'runs': [[letter, exponent] for letter, exponent in value.runs], 'text': str(value)}
        if isinstance(value, ParikhVector):
            return list(value.counts)
        if isinstance(value, PhiVector):
            return list(value.values)
        if isinstance(value, (BinomialSignature, NilNormalForm)):
            return self.to_jsonable(value.as_dict())
        if hasattr(value, 'to_record'):
            return self.to_jsonable(value.to_record())
        if isinstance(value, dict):
            return {str(key): self.to_jsonable(item) for key, item in value.items()}
        if isinstance(value, (set, frozenset)):
            return [self.to_jsonable(item) for item in sorted(value, key=_word_sort_key)]
        if isinstance(value, (list, tuple)):
            return [self.to_jsonable(item) for item in value]
        if isinstance(value, np.ndarray):
            return self.to_jsonable(value.tolist())
        if is_dataclass(value):
            return {field.name: self.to_jsonable(getattr(value, field.name)) for field in fields(value)}

        logger.warning(f"No JSON form for {type(value).__name__}, using its string form")
        return str(value)

    def build_result(self, command: str, inputs: Dict[str, Any], result: Any,
                     budget_used: Optional[int] = None, convention_notes: Sequence[str] = (),
                     config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Single output object; field order is fixed"""
        metadata = {
            'budget_used': budget_used,
            'convention_notes': list(convention_notes),
        }
        if config is not None:
            metadata['config'] = config
        return {
            'command': command,
            'inputs': self.to_jsonable(inputs),
            'result': self.to_jsonable(result),
            'metadata': self.to_jsonable(metadata),
        }

    def build_error(self, command: str, inputs: Dict[str, Any], error: Exception) -> Dict[str, Any]:
        return {
            'command': command,
            'inputs': self.to_jsonable(inputs),
            'error': {'type': type(error).__name__, 'message': str(error)},
        }

    def load_schema(self) -> Dict[str, Any]:
        if self._schema is None:
            with open(self.schema_path, 'r', encoding='utf-8') as f:
                self._schema = json.load(f)
        return self._schema

    def validate_result(self, payload: Dict[str, Any]) -> Tuple[bool, List[str]]:
        """Check a payload against the output schema and return the error messages"""
        validator = jsonschema.Draft7Validator(self.load_schema())
        errors = [
            f"{'/'.join(str(part) for part in error.path) or '<root>'}: {error.message}"
            for error in sorted(validator.iter_errors(payload), key=lambda e: list(e.path))
        ]
        return not errors, errors

    def ensure_valid(self, payload: Dict[str, Any]) -> Dict[str, Any]:
        """Return payload unchanged, or raise OutputSchemaError listing the violations"""
        valid, errors = self.validate_result(payload)
        if not valid:
            for error in errors:
                logger.error(f"Schema violation in {payload.get('command')}: {error}")
            raise OutputSchemaError(str(payload.get('command')), errors)
        return payload

    def render_json(self, payload: Dict[str, Any]) -> str:
        return json.dumps(payload, ensure_ascii=False, indent=2) + '\n'

    def to_frame(self, records: Any) -> pd.DataFrame:
        """Tabular form: a list of flat records, one record, or scalar values"""
        plain = self.to_jsonable(records)
        if isinstance(plain, dict):
            plain = [plain]
        if not isinstance(plain, list):
            plain = [plain]
        if plain and not all(isinstance(row, dict) for row in plain):
            plain = [{'value': row} for row in plain]
        rows = [
            {key: (json.dumps(value) if isinstance(value, (list, dict)) else value) for key, value in row.items()}
            for row in plain
        ]
        return pd.DataFrame(rows)

    def render_csv(self, records: Any, columns: Optional[Sequence[str]] = None) -> str:
        frame = self.to_frame(records)
        if columns is not None:
            frame = frame.reindex(columns=list(columns))
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, lineterminator='\n')
        return buffer.getvalue()

    def render_human(self, payload: Dict[str, Any]) -> str:
        result = payload['result']
        lines = []
        if isinstance(result, list) and all(isinstance(row, dict) for row in result) and result:
            lines.append(self.to_frame(result).to_string(index=False))
        elif isinstance(result, dict):
            width = max((len(str(key)) for key in result), default=0)
            for key, value in result.items():
                lines.append(f"{str(key).ljust(width)}  {json.dumps(value) if isinstance(value, (list, dict)) else value}")
        elif isinstance(result, list):
            lines.extend(str(item) for item in result)
        else:
            lines.append(str(result))
        for note in payload['metadata'].get('convention_notes', []):
            lines.append(f"# {note}")
        return '\n'.join(lines) + '\n'

    def write_output(self, text: str, path: Optional[str] = None, stream=None):
        if path:
            with open(path, 'w', encoding='utf-8') as f:
                f.write(text)
            logger.info(f"Wrote output to {path}")
        else:
            stream.write(text)
