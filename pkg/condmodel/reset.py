import os
import shutil

from .config import REPORTS, VIZ_CONFIG
from .database import ReportStore


def main():
    """Remove the report and plot directories and empty the report store.

    Prints status messages for each operation and any errors encountered.
    """
    store = ReportStore()
    try:
        for directory in (REPORTS.output_dir, VIZ_CONFIG.output_dir):
            if os.path.exists(directory):
                try:
                    shutil.rmtree(directory)
                    print(f"Removed directory: {directory}")
                except Exception as e:
                    print(f"Error removing directory {directory}: {e}")

        store.reset_database()
    finally:
        store.close()


if __name__ == "__main__":
    main()
