from .codegen import emit_interface_comment, generate_class_template, generate_wrappers, wrapper_name
from .lint import Diagnostic, find_managers, has_errors, lint_manager, verify_dispatch
from .model import (
    BaseType,
    ClassSpec,
    FieldSpec,
    FunctionType,
    InterfaceSpec,
    Service,
    SpecError,
    SpecSet,
    TypeExpr,
    UnionSpec,
    parse_interface_comment,
    parse_spec,
    parse_spec_text,
    parse_type_text,
)

__all__ = [
    "BaseType", "ClassSpec", "Diagnostic", "FieldSpec", "FunctionType",
    "InterfaceSpec", "Service", "SpecError", "SpecSet", "TypeExpr", "UnionSpec",
    "emit_interface_comment", "find_managers", "generate_class_template",
    "generate_wrappers", "has_errors", "lint_manager", "parse_interface_comment",
    "parse_spec", "parse_spec_text", "parse_type_text", "verify_dispatch",
    "wrapper_name",
]
