from orlicz_toeplitz.cli import main
import sys

sys.exit(main())
