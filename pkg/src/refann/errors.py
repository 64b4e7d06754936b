"""Exception hierarchy shared by all refann modules."""


class RefannError(Exception):
    """Base class for all refann errors."""

    code = "Error"

    def __init__(self, message=""):
        super().__init__(message or self.code)
        self.message = message or self.code


# --- type registry ---

class DuplicateName(RefannError):
    code = "DuplicateName"


class InvalidSchema(RefannError):
    code = "InvalidSchema"


class BuiltinOverwrite(RefannError):
    code = "BuiltinOverwrite"


class UnknownType(RefannError):
    code = "UnknownType"


# --- repository ingestion ---

class RepoNotFound(RefannError):
    code = "RepoNotFound"


class UnknownCommit(RefannError):
    code = "UnknownCommit"


class MergeCommitUnsupported(RefannError):
    code = "MergeCommitUnsupported"


class MalformedFixture(RefannError):
    code = "MalformedFixture"


# --- element index ---

class CodeFragmentNotEnumerable(RefannError):
    code = "CodeFragmentNotEnumerable"


# --- diff ---

class BinaryFile(RefannError):
    code = "BinaryFile"


# --- annotation ---

class UnknownParameter(RefannError):
    code = "UnknownParameter"


class TypeMismatch(RefannError):
    code = "TypeMismatch"


class FragmentSpansMethods(RefannError):
    code = "FragmentSpansMethods"


class DuplicateElement(RefannError):
    code = "DuplicateElement"


class WrongSide(RefannError):
    code = "WrongSide"


class NoAutofillRule(RefannError):
    code = "NoAutofillRule"


class SourceUnfilled(RefannError):
    code = "SourceUnfilled"


class NoAncestorFound(RefannError):
    code = "NoAncestorFound"


class IncompleteAnnotation(RefannError):
    code = "IncompleteAnnotation"


# --- metrics ---

class InsufficientAnnotators(RefannError):
    code = "InsufficientAnnotators"


# --- storage ---

class SchemaViolation(RefannError):
    code = "SchemaViolation"


class UnresolvableCommit(RefannError):
    code = "UnresolvableCommit"


class VersionConflict(RefannError):
    code = "VersionConflict"


class NotFound(RefannError):
    code = "NotFound"
