from dataclasses import dataclass, field
from enum import Enum


class PageStyle(Enum):
    UNIFORM_RULED_LINES = "uniform_ruled_lines"
    NONUNIFORM_RULED_LINES = "nonuniform_ruled_lines"
    GRID_LINES = "grid_lines"
    STAFF_NOTATION_LINES = "staff_notation_lines"
    PARTIALLY_BLANK = "partially_blank"
    PLAIN = "plain"


class Degradation(Enum):
    SHADOW_GRADIENTS = "shadow_gradients"
    OILY_PATCHES = "oily_patches"
    INK_BLEED_THROUGH = "ink_bleed_through"
    CRUMPLED_PAGES = "crumpled_pages"
    NONUNIFORM_ILLUMINATION = "nonuniform_illumination"
    NOISY_BACKGROUND = "noisy_background"
    LIQUID_STAINS = "liquid_stains"
    POOR_CONTRAST = "poor_contrast"
    PUNCHED_STAPLED_TORN = "punched_stapled_torn"


PAGE_STYLE_TAGS = [p.value for p in PageStyle]
DEGRADATION_TAGS = [d.value for d in Degradation]


@dataclass
class ContentAsset:
    content_id: str
    patch: str
    gt: str

    def to_dict(self) -> dict:
        return {"content_id": self.content_id, "patch": self.patch, "gt": self.gt}

    @classmethod
    def from_dict(cls, data: dict) -> "ContentAsset":
        return cls(
            content_id=str(data["content_id"]),
            patch=str(data["patch"]),
            gt=str(data["gt"]),
        )


@dataclass
class BackgroundAsset:
    background_id: str
    path: str
    page_style: str | None = None  # None for bare degradation patches
    degradations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "background_id": self.background_id,
            "path": self.path,
            "page_style": self.page_style,
            "degradations": list(self.degradations),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BackgroundAsset":
        return cls(
            background_id=str(data["background_id"]),
            path=str(data["path"]),
            page_style=data.get("page_style"),
            degradations=[str(t) for t in data.get("degradations", [])],
        )


@dataclass
class AssetCatalog:
    contents: list[ContentAsset] = field(default_factory=list)
    backgrounds: list[BackgroundAsset] = field(default_factory=list)

    _by_content: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _by_background: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def background_index(self) -> dict[str, BackgroundAsset]:
        return {b.background_id: b for b in self.backgrounds}

    def content_index(self) -> dict[str, ContentAsset]:
        return {c.content_id: c for c in self.contents}

    def content(self, content_id: str) -> ContentAsset:
        """Cached lookup; raises KeyError for unknown ids."""
        if len(self._by_content) != len(self.contents):
            self._by_content = self.content_index()
        return self._by_content[content_id]

    def background(self, background_id: str) -> BackgroundAsset:
        if len(self._by_background) != len(self.backgrounds):
            self._by_background = self.background_index()
        return self._by_background[background_id]
