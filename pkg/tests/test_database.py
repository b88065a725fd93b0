import unittest
from unittest.mock import MagicMock, patch

from condmodel.database import ReportStore


class TestReportStore(unittest.TestCase):
    def setUp(self):
        patcher = patch("condmodel.database.MongoClient")
        self.mock_client_cls = patcher.start()
        self.addCleanup(patcher.stop)
        self.mock_client = self.mock_client_cls.return_value
        self.mock_db = MagicMock()
        self.mock_client.__getitem__.return_value = self.mock_db
        self.store = ReportStore(username="u", password="p", database="condmodel_test")

    def test_connection_string(self):
        self.assertEqual(self.store.connection_string, "mongodb://u:p@localhost:27017/")
        self.assertIsNone(self.store._client)

    def test_connect_is_lazy_and_once(self):
        self.store.connect()
        self.store.connect()
        self.mock_client_cls.assert_called_once_with(self.store.connection_string)
        self.mock_client.__getitem__.assert_called_with("condmodel_test")

    def test_save_report_inserts_copy(self):
        collection = MagicMock()
        self.mock_db.__getitem__.return_value = collection
        report = {"schema": "condmodel/1", "command": "eval"}

        self.assertTrue(self.store.save_report("eval_reports", report))

        collection.insert_one.assert_called_once_with(report)
        inserted = collection.insert_one.call_args[0][0]
        self.assertIsNot(inserted, report)

    def test_save_report_failure(self):
        collection = MagicMock()
        collection.insert_one.side_effect = Exception("server down")
        self.mock_db.__getitem__.return_value = collection

        self.assertFalse(self.store.save_report("eval_reports", {"command": "eval"}))

    def test_find_reports_filters_by_command(self):
        collection = MagicMock()
        collection.find.return_value = [{"command": "bw"}]
        self.mock_db.__getitem__.return_value = collection

        results = self.store.find_reports("bw_reports", command="bw")

        collection.find.assert_called_once_with({"command": "bw"}, {"_id": 0})
        self.assertEqual(results, [{"command": "bw"}])

    def test_get_collection_failure_returns_none(self):
        self.mock_client_cls.side_effect = Exception("bad uri")
        self.assertIsNone(self.store.get_collection("eval_reports"))
        self.assertEqual(self.store.find_reports("eval_reports"), [])

    def test_reset_database_drops_everything(self):
        self.mock_db.list_collection_names.side_effect = [["eval_reports", "bw_reports"], []]

        self.store.reset_database()

        self.assertEqual(self.mock_db.__getitem__.return_value.drop.call_count, 2)

    def test_close(self):
        self.store.connect()
        self.store.close()
        self.mock_client.close.assert_called_once()
        self.assertIsNone(self.store._db)


if __name__ == "__main__":
    unittest.main()
