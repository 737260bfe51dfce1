"""Utils module initialization."""
from chemofront.utils.validation import validate_field, validate_frame, check_number
from chemofront.utils.helpers import merge_dicts, set_dotted, flatten_scalars

__all__ = [
    'validate_field',
    'validate_frame',
    'check_number',
    'merge_dicts',
    'set_dotted',
    'flatten_scalars',
]
