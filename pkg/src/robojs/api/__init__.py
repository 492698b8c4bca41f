"""Robot command API: catalog, grid resolution, and the runtime dispatcher."""

from .manifest import ApiEntry, api_catalog, lookup, manifest_json, namespace_members

__all__ = [
    "ApiEntry",
    "api_catalog",
    "lookup",
    "manifest_json",
    "namespace_members",
]
