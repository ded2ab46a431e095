import pytest

from scenplay import Event, make_sync, resumes
from scenplay.sync import INERT, MultiSync, SyncDeclaration, as_multisync

HOT = Event("Hot")
COLD = Event("Cold")
E = Event("e")


class TestMakeSync:
    def test_defaults(self):
        decl = make_sync(request={HOT})
        assert decl.request == frozenset({HOT})
        assert decl.wait_for == frozenset()
        assert decl.request_priority == 0
        assert decl.block_priority == 0

    def test_single_event_accepted(self):
        decl = make_sync(wait_for=HOT, hard_block=COLD)
        assert decl.wait_for == frozenset({HOT})
        assert decl.hard_block == frozenset({COLD})

    def test_legacy_block_is_hard_block(self):
        decl = make_sync(block={COLD})
        assert decl.hard_block == frozenset({COLD})

    def test_request_and_hard_block_clash_rejected(self):
        with pytest.raises(ValueError):
            make_sync(request={E}, hard_block={E})

    def test_request_plus_soft_block_allowed(self):
        decl = make_sync(request={E}, soft_block={E}, request_priority=2)
        assert decl.request == decl.soft_block == frozenset({E})

    def test_priority_bounds(self):
        with pytest.raises(ValueError):
            make_sync(request={E}, request_priority=2**63)
        with pytest.raises(ValueError):
            make_sync(request_priority="high")


class TestMultiSync:
    def test_nonempty_required(self):
        with pytest.raises(ValueError):
            MultiSync([])

    def test_single_statement_equivalent_to_plain(self):
        decl = make_sync(request={HOT})
        assert as_multisync(decl).statements == (decl,)

    def test_trigger_union(self):
        ms = MultiSync([make_sync(wait_for={HOT}),
                        make_sync(request={E}, soft_block={COLD})])
        assert ms.trigger == frozenset({HOT, E})

    def test_inert_has_no_requests_or_blocks(self):
        assert not INERT.has_requests_or_blocks
        assert INERT.trigger == frozenset()


class TestResumes:
    def test_wait_resumes(self):
        assert resumes(make_sync(wait_for={HOT}), HOT)

    def test_blocking_never_resumes(self):
        assert not resumes(make_sync(soft_block={COLD}), COLD)
        assert not resumes(make_sync(hard_block={COLD}), COLD)

    def test_multi_sync_any_statement(self):
        ms = MultiSync([make_sync(wait_for={HOT}), make_sync(request={E})])
        assert resumes(ms, E)
        assert resumes(ms, HOT)
        assert not resumes(ms, COLD)
