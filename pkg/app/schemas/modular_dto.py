from pydantic import BaseModel, Field
from typing import Iterator, List, Literal

ModLabel = Literal["prime", "series", "parallel", "single"]


class ModTree(BaseModel):
    """Node of the modular decomposition tree"""

    module: List[int] = Field(..., description="Sorted vertex list of the module")
    label: ModLabel
    children: List["ModTree"] = Field(default_factory=list)

    def walk(self) -> Iterator["ModTree"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def modules(self) -> List[List[int]]:
        return [node.module for node in self.walk()]

    def prime_nodes(self) -> List["ModTree"]:
        return [node for node in self.walk() if node.label == "prime"]


ModTree.model_rebuild()
