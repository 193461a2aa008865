"""
Tests for prompt sessions, reply parsing and the wire / mock backends
"""

from types import SimpleNamespace
from unittest.mock import MagicMock, patch

import openai
import pytest

from llm import (
    BackendUnavailable,
    ChatMessage,
    ChatRole,
    MockBackend,
    MockRules,
    NoSelection,
    UnparseableReply,
    WireBackend,
    WireConfig,
    build_backend,
    cluster_name,
    extract_bracketed,
    judge_landmark,
    load_session,
    parse_verdict,
    resolve_member,
    select_landmark,
)
from llm.session import TASKS, split_messages
from tests.conftest import SHOP_TABLE

TABLE_NAMES = list(SHOP_TABLE)


def reply(content: str):
    """A chat-completion response object with one choice."""
    return SimpleNamespace(choices=[SimpleNamespace(message=SimpleNamespace(content=content))])


def wire_backend(*contents: str) -> tuple[WireBackend, MagicMock]:
    client = MagicMock()
    client.chat.completions.create.side_effect = [reply(c) for c in contents]
    return WireBackend(WireConfig(url="http://llm.test/v1", api_key="k"), client=client), client


class TestExtractBracketed:
    """Tests for [[...]] answer extraction."""

    @pytest.mark.parametrize("text, expected", [
        ("the answer would be [[KFC]]. And its position should be (1.2, -0.064, 0.70)", "KFC"),
        ("no brackets here", None),
        ("[[a]] then [[b]]", "a"),
        ("you should go to [[ 必胜客欢乐餐厅 ]]", "必胜客欢乐餐厅"),
        ("empty [[  ]] span", None),
        ("the answer would be [[[KFC]]]", "KFC"),
        ("[[[[HUAWEI]]]] is a phone shop", "HUAWEI"),
        ("maybe [[ [Starbucks ]] there", "Starbucks"),
    ])
    def test_extract(self, text, expected):
        assert extract_bracketed(text) == expected


class TestParseVerdict:
    """Tests for reading 0/1 judgements."""

    @pytest.mark.parametrize("text, expected", [
        ("[[1]]", True),
        ("[[0]]", False),
        ("1", True),
        ("The answer is 0.", False),
        ("Yes, it is a shop.", True),
        ("[[No]] it is a warning sign", False),
    ])
    def test_readable(self, text, expected):
        assert parse_verdict(text) is expected

    @pytest.mark.parametrize("text", ["maybe", "0 or 1", "yes and no"])
    def test_unreadable(self, text):
        with pytest.raises(UnparseableReply):
            parse_verdict(text)


class TestResolveMember:
    """Tests for mapping answers onto the candidate list."""

    def test_exact(self):
        assert resolve_member("GUCCI", TABLE_NAMES) == "GUCCI"

    def test_misspelled_answer(self):
        assert resolve_member("HUAWER", TABLE_NAMES) == "HUAWEI"

    def test_case_folded(self):
        assert resolve_member("washroom", TABLE_NAMES) == "WASHROOM"

    def test_nothing_close(self):
        with pytest.raises(NoSelection):
            resolve_member("STARBUCKS", TABLE_NAMES)


class TestPromptSession:
    """Tests for shipped prompt templates."""

    @pytest.mark.parametrize("task", TASKS)
    def test_priming_opens_with_mission(self, task):
        session = load_session(task, "gpt-3.5-turbo")
        assert session.priming[0].role is ChatRole.SYSTEM
        assert len(session.priming) >= 3
        assert session.temperature == 0.0

    def test_request_appends_user_message(self):
        session = load_session("select_landmark", "m")
        messages = session.request(query="Where can I eat pizza?", names=["KFC", "必胜客欢乐餐厅"])
        assert messages[:-1] == list(session.priming)
        assert messages[-1].role is ChatRole.USER
        assert "[[KFC; 必胜客欢乐餐厅]]" in messages[-1].content
        assert "Where can I eat pizza?" in messages[-1].content

    def test_judge_request(self):
        session = load_session("judge_landmark", "m")
        assert "[[GUCCI]]" in session.request(name="GUCCI")[-1].content

    def test_unknown_task(self):
        with pytest.raises(ValueError):
            load_session("translate", "m")

    def test_override_directory(self, tmp_path):
        (tmp_path / "judge_landmark.prime.j2").write_text(
            "### system\nAnswer [[1]] for shops.\n### user\nKFC\n### assistant\n[[1]]\n",
            encoding="utf-8",
        )
        session = load_session("judge_landmark", "m", prompts_dir=tmp_path)
        assert session.priming[0].content == "Answer [[1]] for shops."
        # request template still comes from the package
        assert "[[DANGER]]" in session.request(name="DANGER")[-1].content

    def test_split_messages(self):
        messages = split_messages("### system\nmission\n### user\nq\n### assistant\na\n")
        assert [m.role for m in messages] == [ChatRole.SYSTEM, ChatRole.USER, ChatRole.ASSISTANT]
        assert messages[0] == ChatMessage(ChatRole.SYSTEM, "mission")

    def test_empty_message_rejected(self):
        with pytest.raises(ValueError):
            ChatMessage(ChatRole.USER, "  ")


class TestMockBackend:
    """Tests for the deterministic stand-in."""

    def test_canonical_name_is_max_count(self, mock_backend):
        members = {"Allenware": 2, "Alienware": 9, "Aiienware": 1}
        assert cluster_name(mock_backend, members) == "Alienware"

    def test_canonical_name_tie_is_lexicographic(self, mock_backend):
        assert cluster_name(mock_backend, {"b": 3, "a": 3}) == "a"

    def test_singleton(self, mock_backend):
        assert cluster_name(mock_backend, {"KFC": 17}) == "KFC"

    def test_judgement_table(self, mock_backend):
        """All twelve rows of the judgement table are reproduced."""
        verdicts = {name: judge_landmark(mock_backend, name) for name in TABLE_NAMES}
        assert verdicts == SHOP_TABLE

    def test_pizza(self, mock_backend):
        assert select_landmark(mock_backend, "Where can I eat pizza?", TABLE_NAMES) == "必胜客欢乐餐厅"

    def test_single_name_is_forced(self, mock_backend):
        assert select_landmark(mock_backend, "anything at all", ["GUCCI"]) == "GUCCI"

    def test_unmatched_query(self, mock_backend):
        with pytest.raises(NoSelection):
            select_landmark(mock_backend, "Where can I buy shoes?", TABLE_NAMES)

    def test_keyword_target_not_in_list(self, mock_backend):
        with pytest.raises(NoSelection):
            select_landmark(mock_backend, "Can I smoke here?", ["KFC", "GUCCI"])

    def test_pure(self, mock_rules):
        a, b = MockBackend(mock_rules), MockBackend(mock_rules)
        for name in TABLE_NAMES:
            assert a.judge_landmark(name) == b.judge_landmark(name)


class TestWireBackend:
    """Tests for the chat-completion transport with a stubbed client."""

    def test_priming_resent_every_call(self):
        backend, client = wire_backend("[[1]]", "[[0]]")
        assert judge_landmark(backend, "KFC") is True
        assert judge_landmark(backend, "DANGER") is False

        first, second = (c.kwargs for c in client.chat.completions.create.call_args_list)
        assert first["messages"][:-1] == second["messages"][:-1]
        assert first["messages"][0]["role"] == "system"
        assert first["temperature"] == 0.0
        assert first["model"] == "gpt-3.5-turbo"

    def test_cluster_name_from_brackets(self):
        backend, client = wire_backend("the most reasonable landmark name, which is [[Don't Touch]]")
        name = cluster_name(backend, {"Don't-Touch": 3, "Dont'tTouch": 2, "Don'tlouch": 1})
        assert name == "Don't Touch"
        sent = client.chat.completions.create.call_args.kwargs["messages"][-1]["content"]
        assert "Don't-Touch" in sent and "Don'tlouch" in sent

    def test_cluster_name_falls_back_to_member(self):
        backend, _ = wire_backend("I would pick Alienware here.")
        assert cluster_name(backend, {"Alienware": 3, "Allenware": 1}) == "Alienware"

    def test_cluster_name_unparseable(self):
        backend, _ = wire_backend("no idea")
        with pytest.raises(UnparseableReply):
            cluster_name(backend, {"Alienware": 3, "Allenware": 1})

    def test_select_resolves_misspelling(self):
        backend, _ = wire_backend("you should go to either [[HUAWER]] or ALIENWARE")
        assert select_landmark(backend, "where can I buy a phone", TABLE_NAMES) == "HUAWEI"

    def test_select_nothing(self):
        backend, _ = wire_backend("I cannot help with that.")
        with pytest.raises(NoSelection):
            select_landmark(backend, "where can I fly a kite", TABLE_NAMES)

    def test_transport_failure(self):
        client = MagicMock()
        client.chat.completions.create.side_effect = openai.APIConnectionError(request=MagicMock())
        backend = WireBackend(WireConfig(url="http://llm.test/v1", api_key="k"), client=client)
        with pytest.raises(BackendUnavailable):
            judge_landmark(backend, "KFC")

    def test_client_configuration(self):
        with patch("llm.wire.openai.OpenAI") as mock_openai:
            WireBackend(WireConfig(url="http://llm.test/v1", api_key="secret", timeout=5, max_retries=2))
        mock_openai.assert_called_once_with(
            api_key="secret", base_url="http://llm.test/v1", timeout=5.0, max_retries=2,
        )


class TestBuildBackend:
    """Tests for backend selection."""

    def test_mock(self):
        assert isinstance(build_backend("mock", mock=MockRules()), MockBackend)

    def test_wire(self):
        with patch("llm.wire.openai.OpenAI"):
            assert isinstance(build_backend("wire", wire=WireConfig(url="http://x")), WireBackend)

    def test_unknown(self):
        with pytest.raises(ValueError):
            build_backend("carrier-pigeon")
