from pluralwv.cli.app import app
