from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, TypeAdapter, field_validator, model_validator


class _Document(BaseModel):
    model_config = ConfigDict(extra="ignore")

    meta: dict[str, str] = Field(default_factory=dict)


class PotentialDocument(_Document):
    kind: Literal["potential"] = "potential"
    V: list[FiniteFloat]

    @field_validator("V")
    @classmethod
    def _has_sites(cls, v):
        if not v:
            raise ValueError("b >= 1 required")
        return v


class SpectrumDocument(_Document):
    kind: Literal["spectrum"] = "spectrum"
    eigs: list[tuple[FiniteFloat, FiniteFloat]]

    @field_validator("eigs")
    @classmethod
    def _even_count(cls, v):
        if len(v) % 2:
            raise ValueError(f"odd count: {len(v)} eigenvalues, expected 2b-2")
        if not v:
            raise ValueError("at least two eigenvalues required")
        return v

    def values(self) -> list[complex]:
        return [complex(re, im) for re, im in self.eigs]


class JostDocument(_Document):
    kind: Literal["jost"] = "jost"
    f0: list[FiniteFloat]
    b: int = Field(ge=1)

    @model_validator(mode="after")
    def _shape(self):
        if not self.f0 or abs(self.f0[0] - 1.0) > 1e-12:
            raise ValueError("f0[0] must be 1")
        if len(self.f0) > 2 * self.b:
            raise ValueError(f"f0 has degree {len(self.f0) - 1} > 2b-1 = {2 * self.b - 1}")
        return self


class BoundStateEntry(BaseModel):
    z: FiniteFloat
    C: FiniteFloat = Field(gt=0)

    @field_validator("z")
    @classmethod
    def _inside_interval(cls, v):
        if not (0 < abs(v) < 1):
            raise ValueError("bound state z must lie in (-1, 0) or (0, 1)")
        return v


class GLDataDocument(JostDocument):
    kind: Literal["gl_data"] = "gl_data"
    bound_states: list[BoundStateEntry] = Field(default_factory=list)


ProblemDocument = Annotated[
    Union[PotentialDocument, SpectrumDocument, JostDocument, GLDataDocument],
    Field(discriminator="kind"),
]

PROBLEM_ADAPTER = TypeAdapter(ProblemDocument)
