# 标准库导入
import sys

# 第三方库导入
from dotenv import load_dotenv

# 本地导入
from cli.app import run


def main() -> None:
    """主函数：加载工作目录下的 .env（LIE_NUM_THREADS、LIE_CONFIG_DIR 等）后运行命令"""
    load_dotenv()
    sys.exit(run())


if __name__ == '__main__':
    main()
