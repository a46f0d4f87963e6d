import importlib
import typing as t


def import_class(name: str, package: str = "tcubature"):
    """Import a class from a dotted path, e.g. ``filters.student_t.RSTSCF``.

    Relative paths (starting with ``.``) are resolved against ``package``.

    """
    module_name, class_name = name.rsplit(".", 1)

    module = importlib.import_module(module_name, package)
    cls = getattr(module, class_name)

    return cls


def get_namespace(
    mapping: t.Mapping[str, t.Any],
    prefix: str,
    lowercase: bool = True,
) -> t.Dict[str, t.Any]:
    """Return the entries of ``mapping`` whose keys start with ``prefix``.

    The prefix is stripped from the returned keys.

    """
    rv = {}
    for key, value in mapping.items():
        if not key.startswith(prefix):
            continue
        key = key[len(prefix) :]
        if lowercase:
            key = key.lower()
        rv[key] = value
    return rv
