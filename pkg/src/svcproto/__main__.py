from svcproto.cli import main
import sys

sys.exit(main())
