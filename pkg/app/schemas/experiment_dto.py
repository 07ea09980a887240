import re
from pydantic import BaseModel, Field, model_validator
from typing import Any, Dict, List, Literal, Optional

ExperimentName = Literal["cfi-subdivision-wl", "tww1-wl-dimension", "red-cut-audit", "lemma21-suite"]

BASE_PATTERN = re.compile(r"^(K4|Petersen|circulant:(\d+):(\d+))$")


class ExperimentSpec(BaseModel):
    """Parameters of one experiment run, validated before any compute"""

    name: ExperimentName
    k: int = Field(1, ge=1, le=4, description="WL dimension under test (cfi-subdivision-wl)")
    s: Optional[int] = Field(
        None, ge=0, description="Subdivision length; default 2*ceil(log2 n) of the CFI graphs"
    )
    base: str = Field("K4", description="CFI base: K4, Petersen or circulant:<n>:<jump>")
    transfer: bool = Field(
        False, description="Also check 1-WL on 1-subdivisions when the bases are 3-WL-equivalent"
    )
    heuristic_time_cap: float = Field(
        30.0, ge=0, description="Seconds for the best-effort twin-width of the subdivision; 0 skips"
    )
    seed: int = Field(0, ge=0)
    samples: int = Field(10, ge=1, le=100_000)
    max_n: int = Field(12, ge=2, le=512, description="Largest sampled graph order")
    output: Optional[str] = Field(None, description="Directory for reports and bundles")

    @model_validator(mode="after")
    def check_parameters(self) -> "ExperimentSpec":
        if not BASE_PATTERN.match(self.base):
            raise ValueError("base must be K4, Petersen or circulant:<n>:<jump>")
        if self.name == "tww1-wl-dimension" and self.max_n < 4:
            raise ValueError("tww1-wl-dimension needs max_n >= 4")
        if self.name == "lemma21-suite" and not 3 <= self.max_n <= 20:
            raise ValueError("lemma21-suite needs 3 <= max_n <= 20")
        return self


class SampleOutcome(BaseModel):
    index: int
    seed: int
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)
    graphs: Dict[str, str] = Field(
        default_factory=dict, exclude=True, description="Graph texts kept for counterexample bundles"
    )


class ExperimentReport(BaseModel):
    name: ExperimentName
    parameters: Dict[str, Any]
    passed: bool
    samples: List[SampleOutcome] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    bundle: Optional[str] = Field(None, description="Counterexample bundle directory, if any")
    elapsed: float = Field(0.0, description="Wall-clock seconds (not reproducible)")
