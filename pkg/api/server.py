"""
Server to launch a FastAPI / Swagger UI instance with.
"""

from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from core.errors import AlgebraError, ConfigError
from core.main_functions.run_command import build_command, run
from core.settings import print_debug_comments

app = FastAPI(title="Mock Hyperbolic Reflection Space API", version="1.0")


class GroupRequest(BaseModel):
    catalog: Optional[str] = None
    group: Optional[dict] = None
    involution: Optional[int] = Field(default=None, ge=0)


class ExtendRequest(BaseModel):
    catalog: Optional[str] = None
    group: Optional[dict] = None


class SweepRequest(BaseModel):
    names: Optional[list[str]] = None
    jobs: int = Field(default=1, ge=1)


class ReportResponse(BaseModel):
    exit_code: Literal[0, 1]
    report: dict


def _run(verb: str, **options) -> ReportResponse:
    try:
        if "group" in options:
            options["document"] = options.pop("group")
        # Remote callers name catalog entries or send inline documents, never server paths
        cmd = build_command(verb=verb, allow_files=False, **options)
        exit_code, payload = run(cmd, print_debug_comments=print_debug_comments())
        return ReportResponse(exit_code=exit_code, report=payload)
    except (AlgebraError, ConfigError) as e:
        # Return a 400-level error for bad inputs and failed preconditions
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        # Catch-all for unexpected errors
        raise HTTPException(status_code=500, detail=f"Unexpected error: {e}")


@app.post("/verify", response_model=ReportResponse)
def api_verify(request: GroupRequest):
    """
    Verify the reflection space on one involution class of a group.

    The complete geometry (every line ℓ(i,j)) is checked against the axioms, then
    the lemma battery runs on it. A sharply 2-transitive permutation group of odd
    characteristic also gets the four geometry conditions. A group document with a
    `geometry` key is checked as a partial space on the supplied lines instead.

    ---
    ### Request Body
    - **catalog** (*str*, optional):
      A catalog name such as `agl1(5)`, `frob(7,3)` or `j9`.
    - **group** (*object*, optional):
      A group document (`{"type": "cayley", ...}` or `{"type": "permgroup", ...}`).
      Exactly one of `catalog` / `group` must be given.
    - **involution** (*int*, optional):
      Element index selecting the involution class.

    ### Responses
    - **200 OK**:
      The run completed. `exit_code` is 0 when every check passes, 1 otherwise.
      ```json
      {
          "exit_code": 0,
          "report": {
              "command": "verify",
              "subject": "agl1(5)",
              "passed": true,
              "report": {
                  "checks": [{"name": "axiom_a_lines_determined", "pass": true, "detail": ""}],
                  "stats": {"Q": 5}
              }
          }
      }
      ```
    - **400 Bad Request**:
      Unknown catalog name, malformed group document, or an algebraic precondition
      failed (for example the group has no involutions).
    - **500 Internal Server Error**:
      Returned if an unexpected error occurs during processing.

    ### Example
    ```bash
    curl -X POST "http://localhost:8000/verify" \\
         -H "Content-Type: application/json" \\
         -d '{"catalog": "agl1(5)"}'
    ```
    """
    return _run("verify", **request.model_dump(exclude_none=True))


@app.post("/split_suite", response_model=ReportResponse)
def api_split_suite(request: GroupRequest):
    """
    Evaluate the eight splitting conditions on the complete geometry of a group.

    ---
    ### Request Body
    Same as `/verify`.

    ### Responses
    - **200 OK**: `exit_code` 0 when the conditions agree (the `equivalence` check), 1 otherwise.
    - **400 Bad Request**: Bad input or a failed precondition.
    - **500 Internal Server Error**: Unexpected errors.
    """
    return _run("split-suite", **request.model_dump(exclude_none=True))


@app.post("/kloop", response_model=ReportResponse)
def api_kloop(request: GroupRequest):
    """
    Build the K-loop of a group and check the loop axioms and precession identities.

    The carrier is the whole group when it is uniquely 2-divisible, otherwise the
    translation set iQ of the selected involution class. The loop table is returned
    under `report.artifacts.loop`.

    ---
    ### Request Body
    Same as `/verify`.

    ### Responses
    - **200 OK**: The report and the `{"carrier", "otimes"}` artifact.
    - **400 Bad Request**: Bad input, or the carrier is not a twisted subgroup.
    - **500 Internal Server Error**: Unexpected errors.
    """
    return _run("kloop", **request.model_dump(exclude_none=True))


@app.post("/extend", response_model=ReportResponse)
def api_extend(request: ExtendRequest):
    """
    Extend a uniquely 2-divisible Frobenius group with abelian complement (or a
    uniquely 2-divisible abelian group) to its quasidirect product and verify the
    reflection geometry on the extension's involutions.

    ---
    ### Request Body
    - **catalog** (*str*, optional): e.g. `frob(7,3)` or `cyclic(5)`.
    - **group** (*object*, optional): A group document with a `complement` (Cayley)
      or `complement_generators` (permgroup) entry.

    ### Responses
    - **200 OK**:
      The report plus `report.artifacts.group` (the extension's Cayley table) and
      `report.artifacts.geometry` (its points and lines).
    - **400 Bad Request**:
      The complement is not abelian, the group is not uniquely 2-divisible, or the
      input is malformed.
    - **500 Internal Server Error**: Unexpected errors.

    ### Example
    ```bash
    curl -X POST "http://localhost:8000/extend" \\
         -H "Content-Type: application/json" \\
         -d '{"catalog": "frob(7,3)"}'
    ```
    """
    return _run("extend", **request.model_dump(exclude_none=True))


@app.post("/sweep", response_model=ReportResponse)
def api_sweep(request: SweepRequest):
    """
    Run every applicable suite over a list of catalog names (the default corpus when
    `names` is omitted). Unknown names and bad parameters return 400; other algebra
    errors are recorded as a failed `entry_error` check instead of aborting the sweep.
    File paths are not accepted here.
    """
    return _run("sweep", **request.model_dump(exclude_none=True))


@app.get("/catalog/{name}", response_model=ReportResponse)
def api_catalog(name: str):
    """
    Describe one catalog entry: order, involution count, center, solvability, the
    permutation action (when there is one) and the Frobenius facts of its complement.
    The entry's Cayley table is returned under `report.artifacts.group`.
    """
    return _run("catalog", catalog=name)
