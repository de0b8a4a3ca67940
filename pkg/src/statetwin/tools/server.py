"""Newline-delimited JSON-RPC 2.0 tool server over stdio.

Methods: ``initialize``, ``tools/list``, ``tools/call``. Each call resolves
``pool_id`` through the server's provider, builds a fresh twin, applies one
primitive and returns its record as both text and ``structuredContent``.
Primitive failures come back as results with ``isError: true``; protocol
failures use the standard JSON-RPC error codes. No input line can stop the
loop short of EOF.
"""

from __future__ import annotations

import json
import sys
from typing import Optional

import jsonschema

from statetwin.errors import StateTwinError
from statetwin.primitives import get as get_primitive
from statetwin.providers.mock import MockProvider
from statetwin.tools.schemas import CURATED_TOOLS, get_tool_schema, list_tools
from statetwin.twin import StateTwinBuilder

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602
INTERNAL_ERROR = -32603

SERVER_INFO = {"name": "statetwin", "version": "0.1.0"}
PROTOCOL_VERSION = "2024-11-05"


class RpcError(Exception):
    def __init__(self, code: int, message: str, data=None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.data = data


def _offending_field(error: jsonschema.ValidationError) -> str:
    if error.validator == "required":
        missing = [k for k in error.validator_value if k not in (error.instance or {})]
        path = [str(p) for p in error.absolute_path]
        return "/".join(path + missing[:1])
    if error.validator == "additionalProperties" and isinstance(error.instance, dict):
        allowed = error.schema.get("properties", {})
        extra = sorted(k for k in error.instance if k not in allowed)
        return "/".join([str(p) for p in error.absolute_path] + extra[:1])
    return "/".join(str(p) for p in error.absolute_path)


class ToolServer:
    """Dispatches tool calls as provider -> builder -> primitive."""

    def __init__(self, provider=None, builder: Optional[StateTwinBuilder] = None):
        self.provider = provider or MockProvider()
        self.builder = builder or StateTwinBuilder()
        self._validators = {
            name: jsonschema.Draft202012Validator(get_tool_schema(name)["inputSchema"])
            for name in CURATED_TOOLS
        }

    # -- tool layer --------------------------------------------------------

    def list_tools(self) -> list:
        return list_tools()

    def validate(self, name: str, arguments) -> None:
        if name not in self._validators:
            raise RpcError(METHOD_NOT_FOUND, f"unknown tool {name!r}", {"tool": name})
        if not isinstance(arguments, dict):
            raise RpcError(INVALID_PARAMS, "arguments must be an object", {"field": "arguments"})
        error = jsonschema.exceptions.best_match(self._validators[name].iter_errors(arguments))
        if error is not None:
            field = _offending_field(error)
            raise RpcError(INVALID_PARAMS, f"invalid arguments: {field}: {error.message}", {"field": field})

    def _twin(self, pool_id: str):
        return self.builder.build(self.provider.snapshot(pool_id))

    def call_tool(self, name: str, arguments: dict) -> dict:
        self.validate(name, arguments)
        args = dict(arguments)
        pool_id = args.pop("pool_id")
        try:
            if name == "aggregate_portfolio":
                record = self._aggregate(pool_id, args)
            else:
                record = get_primitive(name).apply(self._twin(pool_id), **args)
        except (StateTwinError, ValueError, ArithmeticError) as exc:
            error = {"error": type(exc).__name__, "message": str(exc)}
            return {
                "content": [{"type": "text", "text": json.dumps(error)}],
                "structuredContent": error,
                "isError": True,
            }
        payload = record.to_dict()
        return {
            "content": [{"type": "text", "text": json.dumps(payload)}],
            "structuredContent": payload,
            "isError": False,
        }

    def _aggregate(self, pool_id: str, args: dict):
        entries = [{"pool_id": pool_id, "lp_amount": args.get("lp_amount", 1.0),
                    "conversion_rate": args.get("conversion_rate", 1.0)}]
        entries += args.get("positions", [])
        positions = [
            (self._twin(e["pool_id"]), e["lp_amount"], e.get("conversion_rate", 1.0)) for e in entries
        ]
        return get_primitive("aggregate_portfolio").apply(positions)

    # -- JSON-RPC layer ----------------------------------------------------

    def handle(self, message) -> Optional[dict]:
        """Process one decoded message; returns the response, or None for notifications."""
        if not isinstance(message, dict) or message.get("jsonrpc") != "2.0" or "method" not in message:
            msg_id = message.get("id") if isinstance(message, dict) else None
            return _error(msg_id if _valid_id(msg_id) else None, INVALID_REQUEST, "not a JSON-RPC 2.0 request")
        msg_id = message.get("id")
        is_notification = "id" not in message
        if not _valid_id(msg_id):
            return _error(None, INVALID_REQUEST, "id must be a string, number or null")
        try:
            result = self._dispatch(message["method"], message.get("params"))
        except RpcError as exc:
            return None if is_notification else _error(msg_id, exc.code, exc.message, exc.data)
        except Exception as exc:  # never let a request take the loop down
            return None if is_notification else _error(msg_id, INTERNAL_ERROR, f"{type(exc).__name__}: {exc}")
        if is_notification:
            return None
        return {"jsonrpc": "2.0", "id": msg_id, "result": result}

    def _dispatch(self, method, params):
        if method == "initialize":
            return {"protocolVersion": PROTOCOL_VERSION, "capabilities": {"tools": {}}, "serverInfo": SERVER_INFO}
        if method == "tools/list":
            return {"tools": self.list_tools()}
        if method == "tools/call":
            if not isinstance(params, dict):
                raise RpcError(INVALID_PARAMS, "params must be an object", {"field": "params"})
            name = params.get("name")
            if not isinstance(name, str):
                raise RpcError(INVALID_PARAMS, "params.name must be a string", {"field": "name"})
            return self.call_tool(name, params.get("arguments", {}))
        raise RpcError(METHOD_NOT_FOUND, f"method {method!r} not found")

    def handle_line(self, line: str) -> Optional[str]:
        line = line.strip()
        if not line:
            return None
        try:
            message = json.loads(line)
        except (ValueError, RecursionError) as exc:
            return json.dumps(_error(None, PARSE_ERROR, f"parse error: {exc}"))
        response = self.handle(message)
        if response is None:
            return None
        try:
            return json.dumps(response, allow_nan=False, default=str)
        except (ValueError, TypeError) as exc:
            msg_id = response.get("id")
            return json.dumps(_error(msg_id, INTERNAL_ERROR, f"unencodable result: {exc}"))

    def serve(self, stdin=None, stdout=None) -> None:
        stdin = stdin or sys.stdin
        stdout = stdout or sys.stdout
        for raw in stdin:
            try:
                reply = self.handle_line(raw)
            except Exception as exc:  # last line of defence for the loop
                reply = json.dumps(_error(None, INTERNAL_ERROR, f"{type(exc).__name__}: {exc}"))
            if reply is not None:
                stdout.write(reply + "\n")
                stdout.flush()


def _valid_id(value) -> bool:
    return value is None or (isinstance(value, (str, int, float)) and not isinstance(value, bool))


def _error(msg_id, code: int, message: str, data=None) -> dict:
    error = {"code": code, "message": message}
    if data is not None:
        error["data"] = data
    return {"jsonrpc": "2.0", "id": msg_id, "error": error}
