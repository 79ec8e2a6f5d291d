from setuptools import setup, find_packages

setup(
    name="hybrid-autoencoder",
    version="0.1.0",
    description="Hybrid quantum-classical autoencoder for end-to-end radio communication",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "numpy>=1.22.0",
        "networkx>=2.8",
        "pandas>=1.5.0",
        "python-dotenv>=1.0.0",
        "tqdm>=4.65.0",
        "pytest>=7.0.0",
        "black>=23.0.0",
    ],
    entry_points={
        "console_scripts": [
            "hybrid-ae=hybrid_autoencoder.cli:main",
        ],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.9",
)
