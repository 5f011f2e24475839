import typer

from app.commands.bench import bench
from app.commands.history import history_app
from app.commands.run import run
from app.utils.helpers import ExitCodeCommand, ExitCodeGroup

# CLI application for inferring maximal library specifications from client programs
app = typer.Typer(cls=ExitCodeGroup, no_args_is_help=True)
app.command(cls=ExitCodeCommand)(run)
app.command(cls=ExitCodeCommand)(bench)
app.add_typer(history_app, name="history", help="Recorded run history.")


if __name__ == "__main__":
    app()
