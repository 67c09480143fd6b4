from typing import Any, Dict

from jsonschema import ValidationError, validate

from weylab.errors import FixtureError

RATIONAL = {
    "type": "object",
    "properties": {"num": {"type": "integer"}, "den": {"type": "integer", "minimum": 1}},
    "required": ["num", "den"],
}

# Fixture files may spell rationals as "p/q" strings or integers
RATIONAL_TEXT = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}, RATIONAL]}

SERIES = {
    "type": "object",
    "properties": {
        "var": {"type": "string"},
        "order": {"type": "integer", "minimum": 0},
        "coeffs": {"type": "array", "items": RATIONAL},
    },
    "required": ["var", "order", "coeffs"],
}

MULTI_SERIES = {
    "type": "object",
    "properties": {
        "vars": {"type": "array", "items": {"type": "string"}},
        "orders": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "terms": {"type": "array"},
    },
    "required": ["vars", "orders", "terms"],
}

REPORT = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "checked": {"type": "integer", "minimum": 0},
        "passed": {"type": "boolean"},
        "in_scope": {"type": "boolean"},
        "mismatches": {"type": "array"},
    },
    "required": ["name", "checked", "passed", "in_scope", "mismatches"],
}

MATRIX = {
    "type": "object",
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "row_band": {"type": "integer"},
        "col_band": {"type": "integer"},
        "entries": {"type": "array", "items": {"type": "array"}},
    },
    "required": ["dim", "row_band", "col_band", "entries"],
}


def _document(command: str, properties: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "type": "object",
        "properties": {"schema": {"const": 1}, "command": {"const": command}, **properties},
        "required": ["schema", "command", *properties],
    }


NORMAL_ORDER_SCHEMA = _document("normal-order", {
    "operator": {"type": "string"},
    "rendered": {"type": "string"},
    "terms": {"type": "array"},
})

STIRLING_SCHEMA = _document("stirling", {
    "operator": {"type": "string"},
    "in_scope": {"type": "boolean"},
    "table": {
        "type": "object",
        "properties": {
            "excess": {"type": "integer"},
            "rows": {"type": "array", "items": {"type": "array", "items": RATIONAL}},
        },
        "required": ["excess", "rows"],
    },
})

EGF_SCHEMA = _document("egf", {
    "operator": {"type": "string"},
    "g": SERIES,
    "phi": SERIES,
    "report": REPORT,
})

EXP_SCHEMA = _document("exp", {
    "operator": {"type": "string"},
    "lambda_order": {"type": "integer", "minimum": 0},
    "matrix": MATRIX,
})

EXPAND_SCHEMA = _document("expand", {
    "n": {"type": "integer", "minimum": 0},
    "polys": {"type": "array", "items": {"type": "array", "items": RATIONAL}},
    "report": REPORT,
})

INTEGRATE_SCHEMA = _document("integrate", {
    "field": {"type": "string"},
    "prefsub": {
        "type": "object",
        "properties": {"g": MULTI_SERIES, "s": MULTI_SERIES},
        "required": ["g", "s"],
    },
    "reports": {"type": "array", "items": REPORT},
})

OUTPUT_SCHEMAS = {
    "normal-order": NORMAL_ORDER_SCHEMA,
    "stirling": STIRLING_SCHEMA,
    "egf": EGF_SCHEMA,
    "exp": EXP_SCHEMA,
    "expand": EXPAND_SCHEMA,
    "integrate": INTEGRATE_SCHEMA,
}

BASIS = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"kind": {"enum": ["standard", "factorial"]}},
            "required": ["kind"],
        },
        {
            "type": "object",
            "properties": {"columns": {"type": "array", "items": {"type": "array", "items": RATIONAL_TEXT}}},
            "required": ["columns"],
        },
    ]
}

SEQUENCE = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"kind": {"enum": ["ones", "derivative"]}},
            "required": ["kind"],
        },
        {"type": "array", "items": RATIONAL_TEXT, "minItems": 1},
    ]
}

EXPAND_FIXTURE_SCHEMA = {
    "type": "object",
    "properties": {
        "schema": {"const": 1},
        "phi": {
            "oneOf": [
                {
                    "type": "object",
                    "properties": {"kind": {"enum": ["epsilon", "epsilon_transpose", "identity"]}},
                    "required": ["kind"],
                },
                {
                    "type": "object",
                    "properties": {
                        "rows": {"type": "array", "items": {"type": "array", "items": RATIONAL_TEXT}},
                        "row_band": {"type": "integer"},
                        "col_band": {"type": "integer"},
                    },
                    "required": ["rows"],
                },
            ]
        },
        "mode": {"enum": ["ordinary", "continuous"]},
        "a": BASIS,
        "b": BASIS,
        "alpha": SEQUENCE,
        "beta": SEQUENCE,
    },
    "required": ["schema", "phi", "a", "b", "alpha", "beta"],
}


def validate_document(document: Dict[str, Any], schema: Dict[str, Any]) -> Dict[str, Any]:
    """
    Check a JSON document against a schema.

    Raises:
        FixtureError: With the schema message, if the document does not match
    """
    try:
        validate(instance=document, schema=schema)
    except ValidationError as e:
        raise FixtureError(f"[Schema Validation Failed] {e.message}")
    return document


def validate_output(document: Dict[str, Any]) -> Dict[str, Any]:
    return validate_document(document, OUTPUT_SCHEMAS[document["command"]])
