"""JSON schemas for the documents read and written by the command line tool."""

RATIONAL = {
    "oneOf": [
        {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$|^-?[0-9]*\.[0-9]+$"},
        {"type": "integer"},
    ]
}
POSITIVE_RATIONAL = {
    "oneOf": [
        {"type": "string", "pattern": r"^[0-9]*[1-9][0-9]*(/[0-9]*[1-9][0-9]*)?$|^[0-9]*\.[0-9]*[1-9][0-9]*$"},
        {"type": "integer", "minimum": 1},
    ]
}
INTERVAL = {
    "type": "array",
    "items": {"type": "integer", "minimum": 1},
    "minItems": 2,
    "maxItems": 2,
}
INTERVALS = {"type": "array", "items": INTERVAL}
COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
TABLE = {
    "type": "object",
    "required": ["offset", "values"],
    "properties": {
        "offset": {"type": "integer"},
        "values": {"type": "array", "items": POSITIVE_RATIONAL, "minItems": 1},
        "fill": POSITIVE_RATIONAL,
    },
}

WEIGHT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "weight",
    "type": "object",
    "required": ["side", "generator"],
    "properties": {
        "side": {"enum": ["unilateral", "bilateral"]},
        "generator": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["harmonic", "piecewise_bilateral", "table", "weighted_shift", "mirrored"]}
            },
            "allOf": [
                {
                    "if": {"properties": {"kind": {"const": "table"}}},
                    "then": {"required": ["offset", "values"], "properties": TABLE["properties"]},
                },
                {
                    "if": {"properties": {"kind": {"const": "weighted_shift"}}},
                    "then": {
                        "required": ["w", "p"],
                        "properties": {
                            "w": TABLE,
                            "p": POSITIVE_RATIONAL,
                            "shift": {"enum": ["backward", "forward"]},
                        },
                    },
                },
                {
                    "if": {"properties": {"kind": {"const": "mirrored"}}},
                    "then": {"required": ["base"], "properties": {"base": {"$ref": "#"}}},
                },
            ],
        },
    },
}

CERTIFICATE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "certificate",
    "type": "object",
    "required": ["epsilon", "blocks"],
    "properties": {
        "epsilon": POSITIVE_RATIONAL,
        "blocks": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["k", "N", "S"],
                "properties": {
                    "k": {"type": "integer", "minimum": 1},
                    "N": {"type": "integer", "minimum": 1},
                    "S": {"type": "array", "items": {**INTERVAL, "items": {"type": "integer"}}, "minItems": 1},
                    "C": {"oneOf": [{"const": "ones"}, {"type": "array", "items": COMPLEX}]},
                },
            },
        },
        "density_one_set": INTERVALS,
    },
}

VERDICT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "verdict",
    "type": "object",
    "required": ["pass", "blocks"],
    "properties": {
        "pass": {"type": "boolean"},
        "blocks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "count", "required", "witness_ns", "backend"],
                "properties": {
                    "k": {"type": "integer", "minimum": 1},
                    "count": {"type": "integer", "minimum": 0},
                    "required": {"type": "integer", "minimum": 0},
                    "witness_ns": {"type": "array", "items": {"type": "integer"}, "maxItems": 10},
                    "backend": {"enum": ["exact", "float"]},
                },
            },
        },
    },
}

SIMPLE_FUNCTION = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "simple function",
    "type": "object",
    "required": ["support", "coeffs"],
    "properties": {
        "support": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        "coeffs": {"type": "array", "items": COMPLEX, "minItems": 1},
    },
}

SHIFT_VERIFY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "shift verification request",
    "type": "object",
    "required": ["weights", "function", "N"],
    "properties": {
        "weights": WEIGHT,
        "function": SIMPLE_FUNCTION,
        "kind": {"enum": ["backward", "forward"]},
        "N": {"type": "integer", "minimum": 1},
        "k": {"type": "integer", "minimum": 1},
    },
}

DENSITY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "density request",
    "type": "object",
    "required": ["horizons"],
    "properties": {
        "set": INTERVALS,
        "explicit": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "horizons": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
    },
    "oneOf": [{"required": ["set"]}, {"required": ["explicit"]}],
}

MOBIUS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "automorphism",
    "type": "object",
    "oneOf": [
        {
            "required": ["a", "b", "c", "d"],
            "properties": {k: COMPLEX for k in "abcd"},
        },
        {
            "required": ["normal_form"],
            "properties": {
                "normal_form": {
                    "type": "object",
                    "required": ["kind"],
                    "oneOf": [
                        {
                            "properties": {
                                "kind": {"const": "hyperbolic"},
                                "alpha_angle": {"type": "number"},
                                "beta_angle": {"type": "number"},
                                "lambda": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                            },
                            "required": ["alpha_angle", "beta_angle", "lambda"],
                        },
                        {
                            "properties": {
                                "kind": {"const": "parabolic"},
                                "alpha_angle": {"type": "number"},
                                "b": {"type": "number", "not": {"const": 0}},
                            },
                            "required": ["alpha_angle", "b"],
                        },
                        {
                            "properties": {"kind": {"const": "rotation"}, "angle": {"type": "number"}},
                            "required": ["angle"],
                        },
                    ],
                }
            },
        },
    ],
}
