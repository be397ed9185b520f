import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proust.errors import ParseError
from proust.protocol import (
    ProtocolRequest,
    SessionStore,
    build_env_from_script,
    command_to_request,
    corpus_names,
    handle,
    load_corpus,
    run_script,
)
from proust.syntax import read_all


def fresh():
    return SessionStore()


def op(store, **kwargs):
    return handle(store, ProtocolRequest(**kwargs))


def prop_store():
    store = fresh()
    for name in ("A", "B", "C"):
        r = op(store, op="postulate", name=name, expr="Type")
        assert r.status == "ok"
    return store


# basic operations


def test_postulate_and_def():
    store = fresh()
    r = op(store, op="postulate", name="A", expr="Type")
    assert r.status == "ok"
    assert r.transcript == ["postulated A"]
    r = op(store, op="def", name="id-a", expr="((λ x => x) : (A -> A))")
    assert r.status == "ok"
    assert r.transcript == ["defined id-a"]
    r = op(store, op="postulate", name="A", expr="Type")
    assert r.status == "error"
    assert r.error.kind == "duplicate-name"


def test_set_task_response_shape():
    store = prop_store()
    r = op(store, op="set_task", expr="(? : (A -> A))")
    assert r.status == "ok"
    assert r.op == "set_task"
    assert r.task == "(?0 : (A -> A))"
    assert r.goal_count == 1
    assert r.transcript == ["Task is now", "(?0 : (A -> A))"]
    (g,) = r.goals
    assert g.number == 0 and g.type == "(A -> A)" and g.context == []


def test_refine_and_goal_views():
    store = prop_store()
    op(store, op="set_task", expr="(? : ((A ∧ B) -> A))")
    r = op(store, op="refine", goal=0, expr="(λ p => ?)")
    assert r.status == "ok"
    assert r.task == "((λ p => ?1) : ((A ∧ B) -> A))"
    (g,) = r.goals
    assert g.number == 1
    assert g.type == "A"
    assert [(c.name, c.type) for c in g.context] == [("p", "(A ∧ B)")]
    r = op(store, op="refine", goal=1, expr="(∧-elim0 p)")
    assert r.status == "ok"
    assert r.goal_count == 0
    assert r.goals == []


def test_goals_listing_format():
    store = prop_store()
    op(store, op="set_task", expr="(? : (A -> (B -> (A ∧ B))))")
    op(store, op="refine", goal=0, expr="(λ x => (λ y => (∧-intro ? ?)))")
    r = op(store, op="goals")
    assert r.status == "ok"
    assert r.transcript == [
        "?1 : A",
        "  x : A",
        "  y : B",
        "?2 : B",
        "  x : A",
        "  y : B",
    ]


def test_goals_when_none_left():
    store = prop_store()
    op(store, op="set_task", expr="((λ x => x) : (A -> A))")
    r = op(store, op="goals")
    assert r.transcript == ["no goals"]
    assert r.goal_count == 0


def test_undo_round_trip():
    store = prop_store()
    op(store, op="set_task", expr="(? : (A -> A))")
    before = op(store, op="goals")
    op(store, op="refine", goal=0, expr="(λ x => ?)")
    r = op(store, op="undo")
    assert r.status == "ok"
    assert r.task == "(?0 : (A -> A))"
    assert r.transcript == ["Task is now", "(?0 : (A -> A))"]
    assert op(store, op="goals").transcript == before.transcript


def test_check_proof_results():
    store = prop_store()
    r = op(store, op="check_proof", expr="((λ x => x) : (A -> A))")
    assert r.status == "ok"
    assert r.result == "true"
    assert r.transcript == ["true"]
    r = op(store, op="check_proof", expr="((λ x => ?) : (A -> A))")
    assert r.status == "error"
    assert r.error.kind == "incomplete-proof"
    assert r.error.message == "the proof still contains holes"
    r = op(store, op="check_proof", expr="((λ x => x) : (A -> B))")
    assert r.status == "error"
    assert r.error.kind == "cannot-check"


def test_normalize_op():
    store = fresh()
    r = op(store, op="normalize", expr="((λ x => (S x)) (S Z))")
    assert r.status == "ok"
    assert r.result == "(S (S Z))"
    assert r.transcript == ["(S (S Z))"]


def test_normalize_budget_error(monkeypatch):
    monkeypatch.setenv("PROUST_STEP_BUDGET", "50")
    store = fresh()
    r = op(store, op="normalize", expr="((λ x => (x x)) (λ x => (x x)))")
    assert r.status == "error"
    assert r.error.kind == "budget"
    assert r.error.details["term"] == "((λ x => (x x)) (λ x => (x x)))"


def test_reset_clears_env_and_task():
    store = prop_store()
    op(store, op="set_task", expr="(? : (A -> A))")
    r = op(store, op="reset")
    assert r.status == "ok"
    assert r.task is None
    assert r.transcript == ["session reset"]
    r = op(store, op="set_task", expr="(? : (A -> A))")
    assert r.status == "error"  # A is gone with the env
    assert "unknown name A" in r.error.message


# error behavior


def test_failures_leave_the_session_unchanged():
    store = prop_store()
    op(store, op="set_task", expr="(? : (A -> B))")
    r = op(store, op="refine", goal=0, expr="(λ x => x)")
    assert r.status == "error"
    assert r.error.kind == "cannot-check"
    # the error response still shows the live state
    assert r.task == "(?0 : (A -> B))"
    assert r.goal_count == 1
    r = op(store, op="goals")
    assert r.transcript[0] == "?0 : (A -> B)"


def test_error_transcript_shape():
    store = prop_store()
    op(store, op="set_task", expr="(? : (A -> B))")
    r = op(store, op="refine", goal=0, expr="(λ x => x)")
    assert r.transcript[0] == "error: the inferred type does not match the expected type"
    assert "  context: x : A" in r.transcript
    assert "  term: x" in r.transcript
    assert "  expected: B" in r.transcript
    assert "  found: A" in r.transcript


def test_structured_errors():
    store = fresh()
    cases = [
        (dict(op="set_task"), "bad-request"),
        (dict(op="refine", expr="x"), "bad-request"),
        (dict(op="refine", goal=0, expr="x"), "no-such-goal"),
        (dict(op="undo"), "nothing-to-undo"),
        (dict(op="goals"), "no-task"),
        (dict(op="def", expr="(Z : Nat)"), "bad-request"),
        (dict(op="postulate", name="q"), "bad-request"),
        (dict(op="set_task", expr="(? : (A -> A)"), "parse"),
        (dict(op="set_task", expr="(? : X) (? : Y)"), "parse"),
        (dict(op="set_task", expr="(λ x => x)"), "task-not-annotated"),
        (dict(op="normalize", expr="()"), "parse"),
    ]
    for kwargs, kind in cases:
        r = op(store, **kwargs)
        assert r.status == "error", kwargs
        assert r.error.kind == kind, (kwargs, r.error)


def test_refine_on_missing_goal_number():
    store = prop_store()
    op(store, op="set_task", expr="(? : (A -> A))")
    r = op(store, op="refine", goal=7, expr="x")
    assert r.status == "error"
    assert r.error.kind == "no-such-goal"
    assert r.error.message == "no goal numbered 7"


def test_refine_on_no_task_without_goals():
    store = prop_store()
    r = op(store, op="refine", goal=0, expr="x")
    assert r.status == "error"
    assert r.error.kind == "no-such-goal"


def test_handle_never_raises():
    store = fresh()
    nasty = [
        dict(op="set_task", expr=")("),
        dict(op="set_task", expr="(x : ?)"),
        dict(op="normalize", expr="λ"),
        dict(op="def", name="λ", expr="(Z : Nat)"),
        dict(op="def", name="ok", expr="Z"),
        dict(op="postulate", name="p", expr="(? : Type)"),
        dict(op="refine", goal=-3, expr="x"),
    ]
    for kwargs in nasty:
        r = op(store, **kwargs)
        assert r.status == "error"
        assert r.error is not None and r.error.kind


# session isolation and the store


def test_sessions_are_isolated():
    store = fresh()
    r = op(store, op="postulate", name="A", expr="Type", session="left")
    assert r.status == "ok"
    r = op(store, op="set_task", expr="(? : (A -> A))", session="right")
    assert r.status == "error"
    assert "unknown name A" in r.error.message
    r = op(store, op="set_task", expr="(? : (A -> A))", session="left")
    assert r.status == "ok"


def test_unknown_session_is_a_fresh_empty_one():
    store = fresh()
    r = op(store, op="goals", session="brand-new")
    assert r.status == "error"
    assert r.error.kind == "no-task"


def test_ascii_rendering():
    store = fresh()
    op(store, op="postulate", name="A", expr="Type", session="s")
    r = op(store, op="set_task", expr="(? : ((A /\\ A) -> A))",
           session="s", ascii=True)
    assert r.status == "ok"
    assert r.task == "(?0 : ((A /\\ A) -> A))"
    r = op(store, op="set_task", expr="(? : ((A ∧ A) -> A))", session="s")
    assert r.task == "(?0 : ((A ∧ A) -> A))"


# command mapping


def test_command_to_request_mapping():
    req = command_to_request(read_all("(set-task (? : A))")[0])
    assert req.op == "set_task" and req.expr == "(? : A)"
    req = command_to_request(read_all("(set-task! (? : A))")[0])
    assert req.op == "set_task"
    req = command_to_request(read_all("(refine 3 (λ x => x))")[0])
    assert req.op == "refine" and req.goal == 3 and req.expr == "(λ x => x)"
    req = command_to_request(read_all("(def two ((S (S Z)) : Nat))")[0])
    assert req.op == "def" and req.name == "two"
    req = command_to_request(read_all("(postulate A Type)")[0])
    assert req.op == "postulate" and req.expr == "Type"
    for plain in ("(undo)", "(goals)", "(reset)"):
        assert command_to_request(read_all(plain)[0]).op
    req = command_to_request(read_all("(check-proof (Z : Nat))")[0])
    assert req.op == "check_proof"
    req = command_to_request(read_all("(normalize (S Z))")[0])
    assert req.op == "normalize"


def test_command_quote_stripping():
    req = command_to_request(read_all("(set-task '(? : A))")[0])
    assert req.op == "set_task" and req.expr == "(? : A)"


def test_command_errors():
    bad = [
        "(frobnicate x)",
        "(refine x (λ x => x))",
        "(refine 1)",
        "(undo twice)",
        "(set-task)",
        "(def (x) (Z : Nat))",
        "atom",
    ]
    for text in bad:
        with pytest.raises(ParseError):
            command_to_request(read_all(text)[0])


# scripts, recording, replay


def test_run_script_reports_parse_failures_in_place():
    rs = run_script("(postulate A Type) (bogus) (set-task (? : A))")
    assert [r.status for r in rs] == ["ok", "error", "ok"]
    assert rs[1].op == "parse"
    assert rs[2].task == "(?0 : A)"  # the bad form did not stop the rest


def test_run_script_on_unbalanced_text():
    rs = run_script("(postulate A Type")
    assert len(rs) == 1
    assert rs[0].status == "error"
    assert rs[0].error.kind == "parse"


def test_save_dir_records_replayable_script(tmp_path):
    store = SessionStore(save_dir=tmp_path)
    script = """
    (postulate A Type)
    (postulate B Type)
    (set-task (? : ((A ∧ B) -> (B ∧ A))))
    (refine 0 (λ p => (∧-intro ? ?)))
    (refine 1 (∧-elim1 p))
    (undo)
    (refine 1 (∧-elim1 p))
    (refine 2 (∧-elim0 p))
    (goals)
    """
    rs = run_script(script, store=store, session_id="work")
    assert all(r.status == "ok" for r in rs)
    final_task = rs[-2].task
    recorded = (tmp_path / "work.pr").read_text(encoding="utf-8")
    # the recording replays to the same end state
    store2 = SessionStore(save_dir=tmp_path / "again")
    rs2 = run_script(recorded, store=store2, session_id="work")
    assert all(r.status == "ok" for r in rs2)
    assert rs2[-1].task == final_task
    # and re-recording the replay reproduces the file byte for byte
    recorded2 = (tmp_path / "again" / "work.pr").read_text(encoding="utf-8")
    assert recorded2 == recorded


def test_save_dir_skips_failed_and_read_only_ops(tmp_path):
    store = SessionStore(save_dir=tmp_path)
    op(store, op="postulate", name="A", expr="Type", session="s")
    op(store, op="set_task", expr="(? : (A -> A))", session="s")
    op(store, op="refine", goal=0, expr="(λ x => (x x))", session="s")  # fails
    op(store, op="goals", session="s")
    op(store, op="normalize", expr="Z", session="s")
    op(store, op="check_proof", expr="((λ x => x) : (A -> A))", session="s")
    recorded = (tmp_path / "s.pr").read_text(encoding="utf-8")
    assert recorded == ("(postulate A Type)\n"
                        "(set-task (?0 : (A -> A)))\n")


def test_recorded_set_task_uses_renumbered_holes(tmp_path):
    store = SessionStore(save_dir=tmp_path)
    op(store, op="postulate", name="A", expr="Type", session="s")
    op(store, op="set_task", expr="(?9 : (A -> A))", session="s")
    op(store, op="refine", goal=0, expr="(λ x => ?)", session="s")
    recorded = (tmp_path / "s.pr").read_text(encoding="utf-8")
    assert "(set-task (?0 : (A -> A)))" in recorded
    assert "(refine 0 (λ x => ?1))" in recorded


# the bundled corpus


def test_corpus_names():
    names = corpus_names()
    assert names == sorted(names)
    assert {"propositional.pr", "church.pr", "peano.pr", "quantifiers.pr",
            "classical.pr", "classical-attempts.pr"} <= set(names)


def test_corpus_replays():
    for name in corpus_names():
        rs = run_script(load_corpus(name))
        failures = [r for r in rs if r.status != "ok"]
        if name == "classical-attempts.pr":
            assert len(failures) == 6
            assert all(r.op == "check_proof" for r in failures)
            assert all(r.error.kind == "cannot-check" for r in failures)
        else:
            assert not failures, (name, failures[0].error)


def test_build_env_from_script():
    env = build_env_from_script(load_corpus("church.pr"))
    assert env.lookup("plus") is not None
    assert env.lookup("two") is not None


# fuzzing the wire


@given(st.text(alphabet=string.printable, max_size=60))
@settings(max_examples=200, deadline=None)
def test_run_script_never_raises(text):
    for r in run_script(text):
        assert r.status in ("ok", "error")


@given(st.text(alphabet="()λ∀∃?01279xyzS:->=∧∨¬ .", max_size=40),
       st.sampled_from(["set_task", "refine", "normalize", "check_proof"]))
@settings(max_examples=200, deadline=None)
def test_handle_never_raises_on_garbage_exprs(expr, opname):
    store = fresh()
    r = handle(store, ProtocolRequest(op=opname, expr=expr, goal=0))
    assert r.status in ("ok", "error")
