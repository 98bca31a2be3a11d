import asyncio

from textual.coordinate import Coordinate
from textual.widgets import DataTable, Input

from monopoly_lab.app import MonopolyLab, RunOutcomesModal


def _drive(config, scenario):
    async def main():
        app = MonopolyLab(config)
        async with app.run_test() as pilot:
            await scenario(app, pilot)

    asyncio.run(main())


def test_build_and_step_through_rounds(config):
    async def scenario(app, pilot):
        app.family = "dyn-cycle-complete-t2"
        app.query_one("#param-n", Input).value = "5"
        app.action_build()
        await pilot.pause()
        assert app.construction is not None
        assert app.construction.size == 3
        last = app.trace.rounds
        assert app.round_index == last
        app.action_previous_round()
        assert app.round_index == last - 1
        app.action_next_round()
        app.action_next_round()
        assert app.round_index == last

    _drive(config, scenario)


def test_build_reports_bad_parameters(config):
    async def scenario(app, pilot):
        app.family = "mon-circulant"
        app.query_one("#param-n", Input).value = "4"
        app.action_build()
        await pilot.pause()
        assert app.construction is None

    _drive(config, scenario)


def test_solve_in_background_fills_the_cache_table(config):
    async def scenario(app, pilot):
        app.family = "mon-diag"
        app.query_one("#param-n", Input).value = "3"
        app.action_build()
        app.action_solve()
        await app.workers.wait_for_complete()
        await pilot.pause()
        assert app.query_one("#solves-table", DataTable).row_count == 1

    _drive(config, scenario)


def test_check_run_and_outcomes_modal(config):
    async def scenario(app, pilot):
        app.query_one("#bundle-input", Input).value = "figures"
        app._start_checks()
        await app.workers.wait_for_complete()
        await pilot.pause()
        table = app.query_one("#checks-table", DataTable)
        assert table.row_count == 1
        run_id = int(table.coordinate_to_cell_key(Coordinate(0, 0)).row_key.value)
        app.push_screen(RunOutcomesModal(app.session, run_id))
        await pilot.pause()
        outcomes = app.screen.query_one("#outcomes-table", DataTable)
        assert outcomes.row_count == 4

    _drive(config, scenario)
