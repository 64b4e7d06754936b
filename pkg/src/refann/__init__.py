"""refann: a commit-annotation toolkit that turns rough refactoring
detections into validated, parameter-level refactoring instances."""

from .model import (
    Annotation,
    AnnotationStatus,
    CodeElement,
    CommitRef,
    ElementType,
    RefactoringTypeDefinition,
    RevisionSide,
    TextRange,
    TypeRegistry,
)

__all__ = [
    "Annotation",
    "AnnotationStatus",
    "CodeElement",
    "CommitRef",
    "ElementType",
    "RefactoringTypeDefinition",
    "RevisionSide",
    "TextRange",
    "TypeRegistry",
]

__version__ = "0.1.0"
