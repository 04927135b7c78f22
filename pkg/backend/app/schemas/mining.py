# Marshmallow Schemas for mining request validation
from marshmallow import Schema, fields, validate, validates_schema, ValidationError

ALGORITHMS = ["tko", "khmc", "oracle"]


class DatasetRequestSchema(Schema):
    """Inline dataset text in the utility-transaction format"""

    dataset = fields.Str(required=True, validate=validate.Length(min=1))
    strict = fields.Bool(load_default=True)


class MineRequestSchema(DatasetRequestSchema):
    """Schema for a top-k mining request"""

    k = fields.Int(required=True, validate=validate.Range(min=1))
    algo = fields.Str(load_default="tko", validate=validate.OneOf(ALGORITHMS))
    strategies = fields.List(fields.Str(), load_default=None)
    prune = fields.List(fields.Str(), load_default=None)
    rsd_n = fields.Int(load_default=None, validate=validate.Range(min=2))
    cov_cap = fields.Int(load_default=None, validate=validate.Range(min=1))
    profits = fields.Dict(keys=fields.Int(), values=fields.Int(validate=validate.Range(min=1)), load_default=None)
    boundary = fields.Str(load_default="strict", validate=validate.OneOf(["strict", "relaxed"]))
    include_audit = fields.Bool(load_default=False)

    @validates_schema
    def validate_pmud(self, data, **kwargs):
        """pmud needs an external utility table"""
        if data.get("strategies") and "pmud" in data["strategies"] and not data.get("profits"):
            raise ValidationError("profits are required when pmud is selected", "profits")
