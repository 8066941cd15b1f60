import dataclasses
from dataclasses import dataclass, field

from docsynth.models.raster import Transform

MANIFEST_FIELDS = (
    "sample_id", "content_id", "background_id", "rotation", "hflip",
    "seed", "out_input", "out_gt",
)


@dataclass(frozen=True, slots=True)
class ManifestRecord:
    sample_id: int
    content_id: str
    background_id: str
    transform: Transform
    seed: int
    out_input: str  # POSIX path relative to the output root
    out_gt: str

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "content_id": self.content_id,
            "background_id": self.background_id,
            "rotation": self.transform.rotation,
            "hflip": self.transform.hflip,
            "seed": str(self.seed),
            "out_input": self.out_input,
            "out_gt": self.out_gt,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ManifestRecord":
        return cls(
            sample_id=int(data["sample_id"]),
            content_id=str(data["content_id"]),
            background_id=str(data["background_id"]),
            transform=Transform(rotation=int(data["rotation"]), hflip=bool(data["hflip"])),
            seed=int(data["seed"]),
            out_input=str(data["out_input"]),
            out_gt=str(data["out_gt"]),
        )


@dataclass
class GenerationConfig:
    contents_path: str
    backgrounds_path: str
    output_root: str
    per_content: int = 100
    global_seed: int = 0
    jobs: int = 1
    clone_mode: str = "mixed"
    augment: bool = False
    resume: bool = False
    tolerance: float = 1e-8


@dataclass
class SampleFailure:
    sample_id: int
    stage: str  # load | clone | write
    message: str


@dataclass
class GenerationSummary:
    generated: int = 0
    failed: int = 0
    skipped: int = 0
    wall_time: float = 0.0
    failures: list[SampleFailure] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)
