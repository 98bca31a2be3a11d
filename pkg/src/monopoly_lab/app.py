from __future__ import annotations

import logging

from textual import work
from textual.app import App, ComposeResult
from textual.binding import Binding
from textual.containers import Horizontal, Vertical
from textual.screen import ModalScreen
from textual.widgets import Button, ContentSwitcher, DataTable, Footer, Header, Input, Static, Tab, Tabs, Tree

from rich.text import Text

from .config import AppConfig, load_config
from .data import dao
from .data.db import get_engine, get_session
from .domain.engine import ActivationTrace, activate
from .domain.errors import MonopolyLabError
from .services import constructions
from .services.checks import BUNDLES, CheckReport, CheckRunner
from .services.constructions import Construction
from .services.solver import SearchBudget, SolveResult, cached_solve
from .ui.grid import render_grid_rich, render_round

logger = logging.getLogger(__name__)

# Candidate cap for solves started from the browser when the configuration sets none.
UI_SOLVE_CANDIDATES = 2_000_000


class MonopolyLab(App[None]):
    """
    Browse constructions on product graphs, step through activation rounds and
    review recorded solves and check runs.
    """

    BINDINGS = [
        Binding("b", "build", "Build"),
        Binding("s", "solve", "Solve"),
        Binding("left", "previous_round", "Prev round"),
        Binding("right", "next_round", "Next round"),
        Binding("q", "quit", "Quit"),
    ]

    CSS = """
    #sidebar {
        width: 36;
        min-width: 28;
    }
    #family-tree {
        height: 1fr;
    }
    .param {
        width: 1fr;
    }
    #grid, #rounds {
        padding: 1 2;
    }
    """

    def __init__(self, config: AppConfig | None = None) -> None:
        self.config = config or load_config()
        self.engine = get_engine(self.config.database_path)
        self.session = get_session(self.engine)
        dao.init_db(self.session)
        self.family: str | None = None
        self.construction: Construction | None = None
        self.trace: ActivationTrace | None = None
        self.round_index = 0
        super().__init__()

    def compose(self) -> ComposeResult:
        yield Header(show_clock=True)
        with Horizontal():
            with Vertical(id="sidebar"):
                tree = Tree("Families", id="family-tree")
                tree.root.expand()
                yield tree
                with Horizontal():
                    for name in ("m", "n", "k", "t"):
                        yield Input(placeholder=name, id=f"param-{name}", classes="param", type="integer")
                with Horizontal():
                    yield Button("Build", id="build-button")
                    yield Button("Solve", id="solve-button")
                yield Input(placeholder="Bundle (blank for all)", id="bundle-input")
                yield Button("Run checks", id="checks-button")
                yield Static("Status: Ready", id="status-bar")
            with Vertical(id="main"):
                yield Tabs(
                    Tab("Grid", id="tab-grid"),
                    Tab("Rounds", id="tab-rounds"),
                    Tab("Solves", id="tab-solves"),
                    Tab("Checks", id="tab-checks"),
                )
                with ContentSwitcher(initial="grid", id="content-switcher"):
                    yield Static("Pick a family and press Build", id="grid")
                    yield Static("", id="rounds")
                    yield DataTable(id="solves-table")
                    yield DataTable(id="checks-table")
        yield Footer()

    def on_mount(self) -> None:
        self.theme = self.config.ui_theme
        self._setup_tables()
        self._populate_families()
        self.refresh_solves_table()
        self.refresh_checks_table()

    def on_unmount(self) -> None:
        self.session.close()

    def on_tabs_tab_activated(self, event: Tabs.TabActivated) -> None:
        content = self.query_one("#content-switcher", ContentSwitcher)
        mapping = {
            "tab-grid": "grid",
            "tab-rounds": "rounds",
            "tab-solves": "solves-table",
            "tab-checks": "checks-table",
        }
        content.current = mapping.get(event.tab.id or "", "grid")

    def _setup_tables(self) -> None:
        solves = self.query_one("#solves-table", DataTable)
        if not solves.columns:
            solves.add_columns("Graph", "Kind", "n", "Optimum", "Candidates", "Seconds")
        checks = self.query_one("#checks-table", DataTable)
        if not checks.columns:
            checks.add_columns("Run", "Bundle", "Seed", "Passed", "Failed", "Started")
        for table in (solves, checks):
            table.cursor_type = "row"
            table.zebra_stripes = True

    def _populate_families(self) -> None:
        tree = self.query_one("#family-tree", Tree)
        monopolies = tree.root.add("Monopolies", expand=True)
        dynamos = tree.root.add("Dynamos", expand=True)
        for tag, family in constructions.FAMILIES.items():
            parent = monopolies if tag.startswith("mon") else dynamos
            parent.add_leaf(f"{tag} ({', '.join(family.params)})", data=tag)

    def on_tree_node_selected(self, event: Tree.NodeSelected) -> None:
        tag = event.node.data
        if not isinstance(tag, str):
            return
        self.family = tag
        family = constructions.FAMILIES[tag]
        for name in ("m", "n", "k", "t"):
            self.query_one(f"#param-{name}", Input).disabled = name not in family.params
        self._set_status(f"Status: {tag}: {family.summary}")

    def on_button_pressed(self, event: Button.Pressed) -> None:
        if event.button.id == "build-button":
            self.action_build()
        if event.button.id == "solve-button":
            self.action_solve()
        if event.button.id == "checks-button":
            self._start_checks()

    def on_data_table_row_selected(self, event: DataTable.RowSelected) -> None:
        if event.data_table.id != "checks-table" or event.row_key.value is None:
            return
        self.push_screen(RunOutcomesModal(self.session, int(event.row_key.value)))

    def _params(self) -> dict[str, int]:
        params: dict[str, int] = {}
        for name in ("m", "n", "k", "t"):
            value = self.query_one(f"#param-{name}", Input).value.strip()
            if value:
                params[name] = int(value)
        return params

    def action_build(self) -> None:
        if self.family is None:
            self._set_status("Status: Select a family first")
            return
        try:
            built = constructions.build(self.family, **self._params())
        except (MonopolyLabError, ValueError) as exc:
            self._set_status(f"Status: {exc}")
            return
        self.construction = built
        self.trace = activate(built.graph, built.tau, built.vertex_set)
        self.round_index = self.trace.rounds
        self._show_construction()
        self._show_round()

    def _show_construction(self) -> None:
        built = self.construction
        if built is None:
            return
        grid = render_grid_rich(built.graph, built.vertex_set, self.config.grid_member_char, self.config.grid_empty_char)
        header = Text(
            f"{built.graph.name}: {built.kind.value} of size {built.size} ({built.claim.value}, {built.theorem_tag})\n\n",
            style="bold",
        )
        self.query_one("#grid", Static).update(header + grid)
        self._set_status(f"Status: {built.family} verified, size {built.size}")

    def _show_round(self) -> None:
        if self.construction is None or self.trace is None:
            return
        header = Text(f"round {self.round_index} of {self.trace.rounds}\n\n", style="bold")
        body = render_round(self.construction.graph, self.trace, self.round_index, self.config.grid_empty_char)
        self.query_one("#rounds", Static).update(header + body)

    def action_previous_round(self) -> None:
        if self.trace is not None and self.round_index > 0:
            self.round_index -= 1
            self._show_round()

    def action_next_round(self) -> None:
        if self.trace is not None and self.round_index < self.trace.rounds:
            self.round_index += 1
            self._show_round()

    def action_solve(self) -> None:
        if self.construction is None:
            self._set_status("Status: Build a construction before solving")
            return
        built = self.construction
        self._set_status(f"Status: Solving minimum {built.kind.value} of {built.graph.name}...")
        self._solve_worker(built)

    @work(thread=True, exclusive=True, group="solve")
    def _solve_worker(self, built: Construction) -> None:
        budget = SearchBudget(
            max_candidates=self.config.solver_max_candidates or UI_SOLVE_CANDIDATES,
            time_limit_seconds=self.config.solver_time_limit_seconds,
        )
        session = get_session(self.engine) if self.config.solver_cache_enabled else None
        try:
            result = cached_solve(session, built.graph, built.tau, built.kind, budget=budget)
        except MonopolyLabError as exc:
            self.call_from_thread(self._set_status, f"Status: Solve failed ({exc})")
            return
        finally:
            if session is not None:
                session.close()
        self.call_from_thread(self._on_solved, built, result)

    def _on_solved(self, built: Construction, result: SolveResult) -> None:
        if result.solved:
            verdict = "matches" if result.optimum == built.size else f"differs from built {built.size}"
            self._set_status(f"Status: optimum {result.optimum} ({verdict})")
        else:
            self._set_status(f"Status: inconclusive, optimum in [{result.lower_bound}, {result.upper_bound}]")
        self.session.expire_all()
        self.refresh_solves_table()

    def _start_checks(self) -> None:
        bundle = self.query_one("#bundle-input", Input).value.strip() or "all"
        if bundle != "all" and bundle not in BUNDLES:
            self._set_status(f"Status: Unknown bundle {bundle}")
            return
        self._set_status(f"Status: Running {bundle} checks...")
        self._checks_worker(bundle)

    @work(thread=True, exclusive=True, group="checks")
    def _checks_worker(self, bundle: str) -> None:
        session = get_session(self.engine)
        try:
            reports = CheckRunner(session, self.config).run(bundle)
        except MonopolyLabError as exc:
            self.call_from_thread(self._set_status, f"Status: Checks failed to run ({exc})")
            return
        finally:
            session.close()
        self.call_from_thread(self._on_checks_finished, reports)

    def _on_checks_finished(self, reports: list[CheckReport]) -> None:
        passed = sum(r.passed for r in reports)
        failed = sum(r.failed for r in reports)
        self._set_status(f"Status: Checks done, {passed} passed, {failed} failed")
        self.session.expire_all()
        self.refresh_checks_table()

    def refresh_solves_table(self) -> None:
        table = self.query_one("#solves-table", DataTable)
        table.clear()
        for record in dao.list_solves(self.session):
            table.add_row(
                record.graph_name or record.fingerprint[:12],
                record.kind,
                str(record.vertex_count),
                "" if record.optimum is None else str(record.optimum),
                str(record.explored),
                f"{record.elapsed:.3f}",
            )

    def refresh_checks_table(self) -> None:
        table = self.query_one("#checks-table", DataTable)
        table.clear()
        for run in dao.list_check_runs(self.session):
            failed = Text(str(run.failed), style="bold red" if run.failed else "green")
            table.add_row(
                str(run.id),
                run.bundle,
                str(run.seed),
                str(run.passed),
                failed,
                run.started_at.strftime("%Y-%m-%d %H:%M"),
                key=str(run.id),
            )

    def _set_status(self, message: str) -> None:
        try:
            status = self.query_one("#status-bar", Static)
            status.update(message)
        except Exception:
            pass


class RunOutcomesModal(ModalScreen[None]):
    """
    Outcomes of one recorded check run, failures first.
    """

    BINDINGS = [
        Binding("escape", "dismiss", "Close"),
        Binding("q", "dismiss", "Close"),
        Binding("f", "toggle_failed", "Failed only"),
    ]

    def __init__(self, session, run_id: int) -> None:
        super().__init__()
        self.session = session
        self.run_id = run_id
        self.failed_only = False

    def compose(self) -> ComposeResult:
        yield Static(f"Check run {self.run_id}", id="outcomes-title")
        table = DataTable(id="outcomes-table")
        table.add_columns("Instance", "Result", "Detail")
        yield table

    def on_mount(self) -> None:
        self.refresh_outcomes()

    def action_toggle_failed(self) -> None:
        self.failed_only = not self.failed_only
        self.refresh_outcomes()

    def refresh_outcomes(self) -> None:
        table = self.query_one("#outcomes-table", DataTable)
        table.clear()
        outcomes = dao.outcomes_for_run(self.session, self.run_id, failed_only=self.failed_only)
        for outcome in sorted(outcomes, key=lambda o: o.passed):
            result = Text("pass", style="green") if outcome.passed else Text("FAIL", style="bold red")
            table.add_row(outcome.instance, result, outcome.detail or "")
        scope = "failed outcomes" if self.failed_only else "outcomes"
        self.query_one("#outcomes-title", Static).update(f"Check run {self.run_id}: {len(outcomes)} {scope}")


def run() -> None:
    app = MonopolyLab()
    app.run()


if __name__ == "__main__":
    run()
