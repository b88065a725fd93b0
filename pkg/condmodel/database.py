from typing import List, Optional

from pymongo import MongoClient

from .config import MONGODB


class ReportStore:
    """Archive of JSON reports in MongoDB, one collection per command.

    Attributes:
        connection_string (str): MongoDB connection string with authentication details
        database_name (str): Name of the MongoDB database
        _client (Optional[MongoClient]): MongoDB client instance
        _db (Optional[MongoClient]): MongoDB database instance
    """

    def __init__(
        self,
        host: str = MONGODB.host,
        port: int = MONGODB.port,
        username: str = MONGODB.username,
        password: str = MONGODB.password,
        database: str = MONGODB.database,
    ):
        self.connection_string = f"mongodb://{username}:{password}@{host}:{port}/"
        self.database_name = database
        self._client = None
        self._db = None

    def connect(self) -> None:
        """Create the client on first use."""
        if not self._client:
            self._client = MongoClient(self.connection_string)
            self._db = self._client[self.database_name]

    def get_collection(self, collection_name: str):
        """Return the named collection, or None if the server cannot be reached.

        Args:
            collection_name (str): Name of the collection to retrieve

        Returns:
            Optional[pymongo.collection.Collection]: The collection if successful, None otherwise
        """
        try:
            self.connect()
            return self._db[collection_name]
        except Exception as e:
            print(f"Failed to get collection {collection_name}: {e}")
            return None

    def save_report(self, collection_name: str, report: dict) -> bool:
        """Insert a copy of ``report``; the caller's dict is left without an ``_id``.

        Returns:
            bool: True if the report was stored, False otherwise
        """
        collection = self.get_collection(collection_name)
        if collection is None:
            return False
        try:
            collection.insert_one(dict(report))
            print(f"Stored report in collection: {collection_name}")
            return True
        except Exception as e:
            print(f"Error storing report in {collection_name}: {e}")
            return False

    def find_reports(self, collection_name: str, command: Optional[str] = None) -> List[dict]:
        """Stored reports, optionally only those of one command, without Mongo ids."""
        collection = self.get_collection(collection_name)
        if collection is None:
            return []
        query = {"command": command} if command else {}
        return list(collection.find(query, {"_id": 0}))

    def drop_collection(self, collection_name: str) -> bool:
        """Drop a collection.

        Returns:
            bool: True if collection was successfully dropped, False otherwise
        """
        try:
            self.connect()
            self._db[collection_name].drop()
            print(f"Dropped collection: {collection_name}")
            return True
        except Exception as e:
            print(f"Error dropping collection {collection_name}: {e}")
            return False

    def list_collections(self) -> list:
        self.connect()
        return self._db.list_collection_names()

    def reset_database(self) -> None:
        """Drop every collection and report whether any remain."""
        try:
            self.connect()
            for collection in self.list_collections():
                try:
                    self.drop_collection(collection)
                except Exception as e:
                    print(f"Error dropping collection {collection}: {e}")

            if self.list_collections():
                print("Report store reset failed - some collections remain")
            else:
                print("Report store reset successful - all collections deleted")
        except Exception as e:
            print(f"Error resetting report store: {e}")

    def close(self) -> None:
        if self._client:
            self._client.close()
            self._client = None
            self._db = None
