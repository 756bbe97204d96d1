# Command-line front end
from .app import main, build_parser
