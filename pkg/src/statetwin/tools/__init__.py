"""Agent-facing tool server over the curated primitive set."""

from statetwin.tools.schemas import CURATED_TOOLS, get_tool_schema, list_tools
from statetwin.tools.server import ToolServer

__all__ = ["CURATED_TOOLS", "ToolServer", "get_tool_schema", "list_tools"]
