"""Validate every scenario file in a directory against the published schema."""

import json
import pathlib
import sys

import jsonschema


def main() -> int:
    schema_path, scenario_dir = map(pathlib.Path, sys.argv[1:3])
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    files = sorted(scenario_dir.glob("*.json"))
    if not files:
        print(f"no scenario files in {scenario_dir}")
        return 1

    failed = 0
    for path in files:
        errors = sorted(validator.iter_errors(json.loads(path.read_text())), key=str)
        if errors:
            failed += 1
            print(f"FAIL {path.name}")
            for e in errors:
                print(f"  {'/'.join(map(str, e.absolute_path))}: {e.message}")
        else:
            print(f"ok   {path.name}")

    # The schema must also reject a malformed scenario.
    bad = json.loads(files[0].read_text())
    bad["rho_dot_mode"] = "bogus"
    if validator.is_valid(bad):
        print("FAIL schema accepted an invalid rho_dot_mode")
        failed += 1
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
