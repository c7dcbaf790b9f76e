class TreeActionsError(Exception):
    '''
    Base class for every error raised by the tree_actions package.
    '''


class PresentationError(TreeActionsError, ValueError):
    '''
    Raised when words, letters or automorphisms do not match a presentation,
    or when a presentation itself is invalid.
    '''


class UnsupportedPresentationError(PresentationError):
    '''
    Raised when an operation is only defined for a restricted class of
    presentations (for example Whitehead minimization needs a free group).
    '''


class PreconditionError(TreeActionsError, ValueError):
    '''
    Raised when the inputs of an operation violate its precondition, such as
    asking for the axis of an elliptic element.
    '''


class WordParseError(PresentationError):
    '''
    Raised when a serialized word, move or graph cannot be parsed.

    The line and column are 1-based and point at the offending character.
    '''

    def __init__(self, message, text='', line=1, column=1):
        self.text = text
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


class MarkingError(TreeActionsError, ValueError):
    '''
    Raised when a marked graph or a graph morphism has inconsistent markings.
    '''


class ConfigError(TreeActionsError, ValueError):
    '''
    Raised when the run configuration or command line is invalid.
    '''
