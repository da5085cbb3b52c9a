# Matcher module
from src.matcher.detector import TemplateMatcher, match_stream, match_windowed
from src.matcher.models import MatchEvent
