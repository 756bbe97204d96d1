# Utility modules
from .file_parser import FileParser
from .config import ConfigManager, RunConfig, get_config_manager
from .report_writer import Report, ReportWriter
