# Series core module
from src.series_core.errors import (
    DictionaryFormatError,
    DomainError,
    FlatSequenceError,
    IngestError,
    MissingAxisError,
    NoConservedTemplateError,
    OverlapError,
    RowDiagnostic,
    ScheduleError,
    WindowLengthError,
)
from src.series_core.stats import is_flat, sliding_mean_std, z_normalize
from src.series_core.types import (
    ALL_AXES,
    DEFAULT_EPSILON,
    DEFAULT_SAMPLE_RATE_HZ,
    MIN_QUERY_LENGTH,
    Axis,
    LabelInterval,
    MultiAxisSeries,
    TimeSeries,
    intervals_of,
    label_mask,
)
